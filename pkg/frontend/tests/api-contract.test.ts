/**
 * Contract guard: every request the client issues during a
 * representative session matches a documented API route.
 */

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { BASE_URL, riverTalkId } from "./helpers.js";

const DOCUMENTED_ROUTES = [
  /^POST \/api\/login$/,
  /^GET \/api\/search(\?.*)?$/,
  /^POST \/api\/groups$/,
  /^POST \/api\/groups\/[^/]+\/join$/,
  /^GET \/api\/groups\/[^/]+$/,
  /^POST \/api\/groups\/[^/]+\/resources$/,
  /^POST \/api\/resources\/upload(\?.*)?$/,
  /^GET \/api\/resources\/[^/]+$/,
  /^GET \/api\/resources\/[^/]+\/blob$/,
  /^POST \/api\/resources\/[^/]+\/(comments|tags|rating)$/,
  /^POST \/api\/annotate$/,
  /^GET \/api\/talks\/[^/]+$/,
  /^GET \/api\/talks\/[^/]+\/transcript(\?.*)?$/,
  /^GET \/api\/talks\/[^/]+\/annotations$/,
  /^(GET|POST) \/api\/groups\/[^/]+\/messages$/,
  /^GET \/api\/activity(\?.*)?$/,
  /^GET \/api\/stats$/,
  /^GET \/api\/export\.nt$/,
];

describe("client/API contract", () => {
  const requested: string[] = [];
  const realFetch = globalThis.fetch;

  beforeAll(() => {
    globalThis.fetch = ((input: RequestInfo | URL, init?: RequestInit) => {
      const url = String(input);
      requested.push(`${init?.method ?? "GET"} ${url.replace(BASE_URL, "")}`);
      return realFetch(input, init);
    }) as typeof fetch;
  });

  afterAll(() => {
    globalThis.fetch = realFetch;
  });

  it("only calls documented routes during a full session", async () => {
    const client = new ApiClient(BASE_URL);
    await client.login("ada", "teacher-pass");
    const talkId = await riverTalkId(client);
    await client.search("river", { pageSize: 5 });
    await client.getGroup("1");
    await client.getTranscript(talkId, "en");
    await client.listAnnotations(talkId);
    await client.listMessages("1");
    await client.activity({ kind: "search" });
    await client.stats();

    expect(requested.length).toBeGreaterThan(5);
    for (const call of requested) {
      expect(
        DOCUMENTED_ROUTES.some((route) => route.test(call)),
        `undocumented call: ${call}`,
      ).toBe(true);
    }
  });
});
