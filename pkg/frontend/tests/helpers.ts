/** Shared helpers: real API clients against the test server plus DOM
 * selection utilities used by the viewer tests. */

import { ApiClient } from "../src/api.js";
import { CUE_INDEX_ATTR } from "../src/viewer.js";

export const BASE_URL = "http://127.0.0.1:8799";

export async function teacherClient(): Promise<ApiClient> {
  const client = new ApiClient(BASE_URL);
  await client.login("ada", "teacher-pass");
  return client;
}

export async function studentClient(): Promise<ApiClient> {
  const client = new ApiClient(BASE_URL);
  await client.login("ben", "student-pass");
  return client;
}

/** The seeded talk whose English transcript opens on a river bank. */
export async function riverTalkId(client: ApiClient): Promise<string> {
  for (const id of ["1", "2", "3"]) {
    const talk = await client.getTalk(id);
    if (!talk.languages.includes("en")) continue;
    const transcript = await client.getTranscript(id, "en");
    if (transcript.cues[0].text.includes("river bank")) return id;
  }
  throw new Error("seeded river talk not found");
}

/**
 * Builds a DOM Range covering [start, end) of a cue's text, walking text
 * nodes so it still works after highlights have split them.
 */
export function rangeForCueOffsets(
  container: HTMLElement,
  cueIndex: number,
  start: number,
  end: number,
): Range {
  const cueEl = container.querySelector(`[${CUE_INDEX_ATTR}="${cueIndex}"]`);
  if (!cueEl) throw new Error(`no cue ${cueIndex}`);
  const range = document.createRange();
  const walker = document.createTreeWalker(cueEl, NodeFilter.SHOW_TEXT);
  let consumed = 0;
  let node: Node | null;
  while ((node = walker.nextNode())) {
    const length = node.textContent?.length ?? 0;
    if (start >= consumed && start <= consumed + length) {
      range.setStart(node, start - consumed);
    }
    if (end >= consumed && end <= consumed + length) {
      range.setEnd(node, end - consumed);
      return range;
    }
    consumed += length;
  }
  throw new Error(`offsets ${start}..${end} outside cue ${cueIndex}`);
}

export function selectRange(range: Range): Selection {
  const selection = window.getSelection();
  if (!selection) throw new Error("no selection object");
  selection.removeAllRanges();
  selection.addRange(range);
  return selection;
}
