/**
 * Search page: infinite-scrolling result feed plus a shadow-box preview
 * with a "save to group" control.
 *
 * Pagination rules: results append in server order and are never
 * reordered; at most one page request is in flight per cursor chain, and
 * a missing cursor means the feed is exhausted (no further requests).
 */

import type { ApiClient, SearchResult } from "./api.js";
import type { SearchState } from "./state.js";

export const RESULT_KEY_ATTR = "data-result-key";

/** Stable identity of a result within one cursor chain. */
export function resultKey(result: SearchResult): string {
  return `${result.source}:${result.rank}`;
}

export class SearchController {
  private pageSize: number;

  constructor(
    private client: ApiClient,
    private state: SearchState,
    private listEl: HTMLElement,
    private noticeEl: HTMLElement,
    opts: { pageSize?: number } = {},
  ) {
    this.pageSize = opts.pageSize ?? 10;
  }

  /** Begins a fresh cursor chain, clearing previously rendered results. */
  async startSearch(query: string, sources: string[] = []): Promise<void> {
    this.state.query = query;
    this.state.sources = sources;
    this.state.cursor = null;
    this.state.results = [];
    this.state.degraded = [];
    this.listEl.textContent = "";
    this.noticeEl.textContent = "";
    await this.fetchPage(undefined);
  }

  /**
   * Loads the next page if a cursor is present and no request is already
   * in flight. Scroll handlers can call this freely; calls are coalesced.
   */
  async loadMore(): Promise<void> {
    if (this.state.loading || this.state.cursor === null) return;
    await this.fetchPage(this.state.cursor);
  }

  get exhausted(): boolean {
    return this.state.cursor === null;
  }

  private async fetchPage(cursor: string | undefined): Promise<void> {
    this.state.loading = true;
    try {
      const page = await this.client.search(this.state.query, {
        sources: this.state.sources,
        cursor,
        pageSize: this.pageSize,
      });
      this.state.cursor = page.next_cursor;
      this.state.degraded = page.degraded_sources;
      this.renderNotice();
      for (const result of page.results) this.appendResult(result);
    } finally {
      this.state.loading = false;
    }
  }

  private appendResult(result: SearchResult): void {
    const key = resultKey(result);
    const already = this.listEl.querySelector(`[${RESULT_KEY_ATTR}="${key}"]`);
    if (already) return;
    this.state.results.push(result);

    const item = document.createElement("article");
    item.className = "search-result";
    item.setAttribute(RESULT_KEY_ATTR, key);

    const title = document.createElement("h3");
    title.textContent = result.title;
    item.appendChild(title);

    const source = document.createElement("span");
    source.className = "result-source";
    source.textContent = result.source;
    item.appendChild(source);

    const snippet = document.createElement("p");
    snippet.className = "result-snippet";
    renderSnippet(snippet, result.description, this.state.query);
    item.appendChild(snippet);

    item.addEventListener("click", () => openPreview(result, this.state.query));
    this.listEl.appendChild(item);
  }

  private renderNotice(): void {
    if (this.state.degraded.length) {
      this.noticeEl.textContent =
        `Some sources did not respond: ${this.state.degraded.join(", ")}. ` +
        "Results may be incomplete.";
    } else {
      this.noticeEl.textContent = "";
    }
  }
}

/**
 * Renders a description snippet with the query terms wrapped in <mark>,
 * so transcript matches show where the keywords occur.
 */
export function renderSnippet(
  el: HTMLElement,
  text: string,
  query: string,
): void {
  el.textContent = "";
  const terms = query.toLowerCase().split(/\s+/).filter(Boolean);
  if (!terms.length) {
    el.textContent = text;
    return;
  }
  const pattern = new RegExp(
    `(${terms.map((t) => t.replace(/[.*+?^${}()|[\]\\]/g, "\\$&")).join("|")})`,
    "gi",
  );
  for (const part of text.split(pattern)) {
    if (!part) continue;
    if (terms.includes(part.toLowerCase())) {
      const mark = document.createElement("mark");
      mark.textContent = part;
      el.appendChild(mark);
    } else {
      el.appendChild(document.createTextNode(part));
    }
  }
}

/** Opens a modal overlay with the result's metadata and a save control. */
export function openPreview(result: SearchResult, query: string): HTMLElement {
  closePreview();
  const overlay = document.createElement("div");
  overlay.className = "shadow-box-overlay";
  overlay.id = "shadow-box";

  const box = document.createElement("div");
  box.className = "shadow-box";

  const title = document.createElement("h2");
  title.textContent = result.title;
  box.appendChild(title);

  if (result.thumbnail_url) {
    const img = document.createElement("img");
    img.src = result.thumbnail_url;
    img.alt = result.title;
    box.appendChild(img);
  }

  const description = document.createElement("p");
  renderSnippet(description, result.description, query);
  box.appendChild(description);

  const meta = document.createElement("dl");
  for (const [label, value] of [
    ["Source", result.source],
    ["Link", result.url],
  ]) {
    const dt = document.createElement("dt");
    dt.textContent = label;
    const dd = document.createElement("dd");
    dd.textContent = value;
    meta.append(dt, dd);
  }
  box.appendChild(meta);

  const save = document.createElement("button");
  save.className = "save-to-group";
  save.textContent = "Save to group";
  box.appendChild(save);

  const close = document.createElement("button");
  close.className = "close-preview";
  close.textContent = "Close";
  close.addEventListener("click", closePreview);
  box.appendChild(close);

  overlay.appendChild(box);
  document.body.appendChild(overlay);
  return overlay;
}

export function closePreview(): void {
  document.getElementById("shadow-box")?.remove();
}

/** Wires the save button of an open preview to the groups endpoint. */
export function bindSaveToGroup(
  overlay: HTMLElement,
  client: ApiClient,
  groupId: string,
  result: SearchResult,
): void {
  const button = overlay.querySelector<HTMLButtonElement>(".save-to-group");
  if (!button) return;
  button.addEventListener("click", async () => {
    button.disabled = true;
    await client.saveResource(groupId, {
      source: result.source,
      url: result.url,
      title: result.title,
      description: result.description,
    });
    button.textContent = "Saved";
  });
}
