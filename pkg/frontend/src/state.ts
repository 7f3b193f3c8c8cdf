/** Shared view state for the single-page app. */

import type { SearchResult } from "./api.js";

export type Page = "search" | "group" | "talk-viewer" | "monitor";

export interface SearchState {
  query: string;
  sources: string[];
  /** Cursor for the next page; null once the feed is exhausted. */
  cursor: string | null;
  /** Append-only within one cursor chain; never reordered. */
  results: SearchResult[];
  degraded: string[];
  loading: boolean;
}

export interface ViewerState {
  talkId: string | null;
  language: string;
  /** Playback position in milliseconds; drives cue auto-highlight. */
  positionMs: number;
  pendingSelection: {
    cueIndex: number;
    charStart: number;
    charEnd: number;
    text: string;
  } | null;
}

export interface ViewState {
  token: string | null;
  activePage: Page;
  search: SearchState;
  viewer: ViewerState;
}

export function initialState(): ViewState {
  return {
    token: null,
    activePage: "search",
    search: {
      query: "",
      sources: [],
      cursor: null,
      results: [],
      degraded: [],
      loading: false,
    },
    viewer: {
      talkId: null,
      language: "en",
      positionMs: 0,
      pendingSelection: null,
    },
  };
}
