/**
 * Typed client for the platform's JSON API.
 *
 * Every network call the UI makes goes through this module, so the set of
 * exported functions doubles as the list of endpoints the client depends on.
 */

export interface LoginResponse {
  token: string;
  expires_at: number;
}

export interface SearchResult {
  source: string;
  rank: number;
  url: string;
  title: string;
  description: string;
  thumbnail_url: string | null;
}

export interface SearchPage {
  results: SearchResult[];
  next_cursor: string | null;
  degraded_sources: string[];
}

export interface Group {
  id: string;
  title: string;
  course_id: string | null;
  member_ids: string[];
  resource_ids: string[];
}

export interface Resource {
  id: string;
  source: string;
  url: string;
  title: string;
  description: string;
  thumbnail_url: string | null;
  media_type: string;
  owner_id: string;
  created_at: number;
  tags: { user_id: string; tag: string }[];
  comments: { id: string; user_id: string; text: string; created_at: number }[];
  ratings: Record<string, number>;
  average_rating: number | null;
}

export interface Talk {
  id: string;
  title: string;
  description: string;
  speaker: string;
  duration_s: number;
  published_at: string;
  source_url: string;
  languages: string[];
}

export interface Cue {
  start_ms: number;
  dur_ms: number;
  text: string;
}

export interface Transcript {
  talk_id: string;
  language: string;
  cues: Cue[];
}

export interface Annotation {
  id: string;
  user_id: string;
  talk_id: string;
  language: string;
  cue_index: number;
  char_start: number;
  char_end: number;
  note: string | null;
  created_at: number;
}

export interface TooltipEntry {
  definitions: { sense: number; gloss: string }[];
  synonyms: { lemma: string; score: number }[];
}

export interface Tooltip {
  word: string;
  per_pos: Record<string, TooltipEntry>;
}

export interface AnnotateResponse {
  annotation: Annotation;
  tooltip: Tooltip | null;
}

export interface Message {
  id: string;
  from_user: string;
  to_group: string;
  text: string;
  created_at: number;
}

export interface ActivityEvent {
  id: string;
  user_id: string;
  kind: string;
  payload: Record<string, unknown>;
  at: number;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

export class ApiClient {
  token: string | null = null;

  constructor(private baseUrl: string = "") {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const headers: Record<string, string> = {};
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    if (body !== undefined) headers["Content-Type"] = "application/json";
    const response = await fetch(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json();
    if (!response.ok) {
      const err = payload?.error ?? { code: "unknown", message: "request failed" };
      throw new ApiError(response.status, err.code, err.message);
    }
    return payload as T;
  }

  async login(username: string, password: string): Promise<LoginResponse> {
    const res = await this.request<LoginResponse>("POST", "/api/login", {
      username,
      password,
    });
    this.token = res.token;
    return res;
  }

  search(
    q: string,
    opts: { sources?: string[]; cursor?: string; pageSize?: number } = {},
  ): Promise<SearchPage> {
    const params = new URLSearchParams({ q });
    if (opts.sources?.length) params.set("sources", opts.sources.join(","));
    if (opts.cursor) params.set("cursor", opts.cursor);
    if (opts.pageSize) params.set("page_size", String(opts.pageSize));
    return this.request("GET", `/api/search?${params}`);
  }

  createGroup(title: string, courseId?: string): Promise<Group> {
    return this.request("POST", "/api/groups", {
      title,
      course_id: courseId ?? null,
    });
  }

  joinGroup(groupId: string): Promise<Group> {
    return this.request("POST", `/api/groups/${groupId}/join`);
  }

  getGroup(groupId: string): Promise<Group> {
    return this.request("GET", `/api/groups/${groupId}`);
  }

  saveResource(
    groupId: string,
    resource: { source: string; url: string; title: string; description?: string },
  ): Promise<Resource> {
    return this.request("POST", `/api/groups/${groupId}/resources`, resource);
  }

  getResource(resourceId: string): Promise<Resource> {
    return this.request("GET", `/api/resources/${resourceId}`);
  }

  addComment(resourceId: string, text: string): Promise<Resource> {
    return this.request("POST", `/api/resources/${resourceId}/comments`, { text });
  }

  getTalk(talkId: string): Promise<Talk> {
    return this.request("GET", `/api/talks/${talkId}`);
  }

  getTranscript(talkId: string, lang: string): Promise<Transcript> {
    const params = new URLSearchParams({ lang });
    return this.request("GET", `/api/talks/${talkId}/transcript?${params}`);
  }

  listAnnotations(talkId: string): Promise<{ annotations: Annotation[] }> {
    return this.request("GET", `/api/talks/${talkId}/annotations`);
  }

  annotate(selection: {
    talk_id: string;
    language: string;
    cue_index: number;
    char_start: number;
    char_end: number;
    note?: string;
  }): Promise<AnnotateResponse> {
    return this.request("POST", "/api/annotate", selection);
  }

  listMessages(groupId: string): Promise<{ messages: Message[] }> {
    return this.request("GET", `/api/groups/${groupId}/messages`);
  }

  sendMessage(groupId: string, text: string): Promise<Message> {
    return this.request("POST", `/api/groups/${groupId}/messages`, { text });
  }

  activity(
    filter: { course?: string; user?: string; kind?: string; since?: number } = {},
  ): Promise<{ events: ActivityEvent[] }> {
    const params = new URLSearchParams();
    if (filter.course) params.set("course", filter.course);
    if (filter.user) params.set("user", filter.user);
    if (filter.kind) params.set("kind", filter.kind);
    if (filter.since !== undefined) params.set("since", String(filter.since));
    const suffix = params.size ? `?${params}` : "";
    return this.request("GET", `/api/activity${suffix}`);
  }

  stats(): Promise<Record<string, number>> {
    return this.request("GET", "/api/stats");
  }
}
