/**
 * Entry point: login form, page navigation, and wiring between the
 * controllers and the document. Served as static assets by the
 * platform's `serve` command and talks only to its JSON API.
 */

import { ApiClient } from "./api.js";
import { MonitorController } from "./monitor.js";
import { SearchController } from "./search.js";
import { initialState, type Page } from "./state.js";
import {
  ViewerController,
  highlightActiveCue,
  selectionToCueOffsets,
} from "./viewer.js";

const client = new ApiClient("");
const state = initialState();

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

function showPage(page: Page): void {
  state.activePage = page;
  for (const section of document.querySelectorAll<HTMLElement>("[data-page]")) {
    section.hidden = section.getAttribute("data-page") !== page;
  }
}

function setupLogin(): void {
  const form = el<HTMLFormElement>("login-form");
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    const username = el<HTMLInputElement>("login-username").value;
    const password = el<HTMLInputElement>("login-password").value;
    try {
      await client.login(username, password);
      state.token = client.token;
      el("login-error").textContent = "";
      el("app").hidden = false;
      el("login").hidden = true;
      showPage("search");
    } catch (err) {
      el("login-error").textContent = "Login failed.";
    }
  });
}

function setupSearch(): SearchController {
  const controller = new SearchController(
    client,
    state.search,
    el("search-results"),
    el("search-notice"),
  );
  el<HTMLFormElement>("search-form").addEventListener("submit", (event) => {
    event.preventDefault();
    const query = el<HTMLInputElement>("search-query").value;
    void controller.startSearch(query);
  });
  // coalesced by the controller's single in-flight request rule
  window.addEventListener("scroll", () => {
    const nearBottom =
      window.innerHeight + window.scrollY >= document.body.scrollHeight - 200;
    if (nearBottom) void controller.loadMore();
  });
  return controller;
}

function setupViewer(): void {
  const openButton = el<HTMLButtonElement>("open-talk");
  openButton.addEventListener("click", async () => {
    const talkId = el<HTMLInputElement>("talk-id").value;
    state.viewer.talkId = talkId;
    const viewer = new ViewerController(
      client,
      talkId,
      state.viewer.language,
      el("transcript"),
      el("viewer-error"),
    );
    await viewer.load();
    const transcript = await client.getTranscript(talkId, state.viewer.language);
    showPage("talk-viewer");

    document.addEventListener("mouseup", () => {
      const selection = window.getSelection();
      if (!selection) return;
      const offsets = selectionToCueOffsets(selection);
      if (offsets) void viewer.onSelection(offsets);
    });

    // placeholder playback clock synchronized to cue timestamps
    window.setInterval(() => {
      state.viewer.positionMs += 500;
      highlightActiveCue(el("transcript"), transcript.cues, state.viewer.positionMs);
    }, 500);
  });
}

function setupMonitor(): void {
  const monitor = new MonitorController(client, el("activity"), () =>
    showPage("search"),
  );
  el<HTMLButtonElement>("nav-monitor").addEventListener("click", async () => {
    if (await monitor.load()) showPage("monitor");
  });
}

export function boot(): void {
  setupLogin();
  setupSearch();
  setupViewer();
  setupMonitor();
  el<HTMLButtonElement>("nav-search").addEventListener("click", () =>
    showPage("search"),
  );
}

if (typeof document !== "undefined" && document.getElementById("login-form")) {
  boot();
}
