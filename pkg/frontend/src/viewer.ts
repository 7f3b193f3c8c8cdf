/**
 * Two-column talk viewer: media pane on the left, transcript on the
 * right. Highlighting a single word in the transcript posts the
 * selection to the annotation endpoint and shows the returned tooltip;
 * multi-word selections open a note prompt instead.
 *
 * Offset fidelity is the load-bearing invariant here: each cue renders
 * its text verbatim, and selection offsets are computed against that
 * exact string, so `cue.text.slice(char_start, char_end)` on the server
 * always equals what the user highlighted.
 */

import type {
  Annotation,
  AnnotateResponse,
  ApiClient,
  Cue,
  Transcript,
} from "./api.js";
import { ApiError } from "./api.js";
import { renderTooltip, removeTooltip } from "./tooltip.js";

export const CUE_INDEX_ATTR = "data-cue-index";

export interface CueSelection {
  cueIndex: number;
  charStart: number;
  charEnd: number;
  text: string;
}

/** Renders the transcript column; one element per cue, text verbatim. */
export function renderTranscript(
  container: HTMLElement,
  transcript: Transcript,
  annotations: Annotation[] = [],
): void {
  container.textContent = "";
  transcript.cues.forEach((cue, index) => {
    const el = document.createElement("p");
    el.className = "cue";
    el.setAttribute(CUE_INDEX_ATTR, String(index));
    el.appendChild(document.createTextNode(cue.text));
    container.appendChild(el);
  });
  for (const annotation of annotations) {
    if (annotation.language === transcript.language) {
      highlightRange(container, annotation.cue_index, annotation.char_start,
                     annotation.char_end);
    }
  }
}

/** The cue element that should glow at the given playback position. */
export function cueIndexAt(cues: Cue[], positionMs: number): number {
  let active = 0;
  cues.forEach((cue, index) => {
    if (cue.start_ms <= positionMs) active = index;
  });
  return active;
}

export function highlightActiveCue(
  container: HTMLElement,
  cues: Cue[],
  positionMs: number,
): void {
  const active = cueIndexAt(cues, positionMs);
  container.querySelectorAll(".cue").forEach((el) => {
    const index = Number(el.getAttribute(CUE_INDEX_ATTR));
    el.classList.toggle("cue-active", index === active);
  });
}

function cueElementOf(node: Node): HTMLElement | null {
  let current: Node | null = node;
  while (current) {
    if (current instanceof HTMLElement && current.hasAttribute(CUE_INDEX_ATTR)) {
      return current;
    }
    current = current.parentNode;
  }
  return null;
}

/** Character offset of (node, offset) within the cue's full text. */
function offsetWithinCue(cueEl: HTMLElement, node: Node, offset: number): number {
  if (node === cueEl) {
    // offset counts child nodes; sum the text before that child
    let total = 0;
    for (let i = 0; i < offset; i++) {
      total += cueEl.childNodes[i]?.textContent?.length ?? 0;
    }
    return total;
  }
  let total = 0;
  const walker = document.createTreeWalker(cueEl, NodeFilter.SHOW_TEXT);
  let text: Node | null;
  while ((text = walker.nextNode())) {
    if (text === node) return total + offset;
    total += text.textContent?.length ?? 0;
  }
  return total;
}

/**
 * Maps the current DOM selection to cue-relative offsets, or null when
 * the selection is empty or spans more than one cue (rejected before any
 * network call per the one-cue rule).
 */
export function selectionToCueOffsets(selection: Selection): CueSelection | null {
  if (selection.rangeCount === 0 || selection.isCollapsed) return null;
  const range = selection.getRangeAt(0);
  const startCue = cueElementOf(range.startContainer);
  const endCue = cueElementOf(range.endContainer);
  if (!startCue || !endCue || startCue !== endCue) return null;

  const cueIndex = Number(startCue.getAttribute(CUE_INDEX_ATTR));
  const charStart = offsetWithinCue(startCue, range.startContainer, range.startOffset);
  const charEnd = offsetWithinCue(startCue, range.endContainer, range.endOffset);
  if (charEnd <= charStart) return null;
  const text = (startCue.textContent ?? "").slice(charStart, charEnd);
  return { cueIndex, charStart, charEnd, text };
}

/** Wraps [charStart, charEnd) of a cue's text in a highlight mark. */
export function highlightRange(
  container: HTMLElement,
  cueIndex: number,
  charStart: number,
  charEnd: number,
): void {
  const cueEl = container.querySelector(`[${CUE_INDEX_ATTR}="${cueIndex}"]`);
  if (!cueEl) return;
  let consumed = 0;
  for (const node of Array.from(cueEl.childNodes)) {
    const length = node.textContent?.length ?? 0;
    const nodeStart = consumed;
    consumed += length;
    if (node.nodeType !== Node.TEXT_NODE) continue;
    if (charStart >= consumed || charEnd <= nodeStart) continue;
    const localStart = Math.max(0, charStart - nodeStart);
    const localEnd = Math.min(length, charEnd - nodeStart);
    const textNode = node as Text;
    const tail = textNode.splitText(localStart);
    tail.splitText(localEnd - localStart);
    const mark = document.createElement("mark");
    mark.className = "annotation-highlight";
    mark.textContent = tail.textContent;
    tail.replaceWith(mark);
    return;
  }
}

export class ViewerController {
  constructor(
    private client: ApiClient,
    private talkId: string,
    private language: string,
    private transcriptEl: HTMLElement,
    private errorEl: HTMLElement,
  ) {}

  async load(): Promise<void> {
    const transcript = await this.client.getTranscript(this.talkId, this.language);
    const listed = await this.client.listAnnotations(this.talkId);
    renderTranscript(this.transcriptEl, transcript, listed.annotations);
  }

  /**
   * Handles a finished selection. Single words get an immediate
   * annotation plus tooltip; phrases open a note prompt and are only
   * annotated once the note is submitted.
   */
  async onSelection(selection: CueSelection): Promise<AnnotateResponse | null> {
    this.errorEl.textContent = "";
    if (/\s/.test(selection.text.trim()) ) {
      this.openNotePrompt(selection);
      return null;
    }
    return this.annotate(selection);
  }

  private async annotate(
    selection: CueSelection,
    note?: string,
  ): Promise<AnnotateResponse | null> {
    try {
      const response = await this.client.annotate({
        talk_id: this.talkId,
        language: this.language,
        cue_index: selection.cueIndex,
        char_start: selection.charStart,
        char_end: selection.charEnd,
        note,
      });
      highlightRange(this.transcriptEl, selection.cueIndex,
                     selection.charStart, selection.charEnd);
      removeTooltip();
      if (response.tooltip) {
        const anchor = this.transcriptEl.querySelector(
          `[${CUE_INDEX_ATTR}="${selection.cueIndex}"]`,
        ) as HTMLElement;
        renderTooltip(response.tooltip, anchor);
      }
      return response;
    } catch (err) {
      // shown inline; the pending selection state stays untouched
      if (err instanceof ApiError) {
        this.errorEl.textContent = err.message;
        return null;
      }
      throw err;
    }
  }

  private openNotePrompt(selection: CueSelection): void {
    document.getElementById("note-prompt")?.remove();
    const form = document.createElement("form");
    form.id = "note-prompt";
    const input = document.createElement("input");
    input.name = "note";
    input.placeholder = `Note for “${selection.text}”`;
    const submit = document.createElement("button");
    submit.type = "submit";
    submit.textContent = "Save note";
    form.append(input, submit);
    form.addEventListener("submit", async (event) => {
      event.preventDefault();
      await this.annotate(selection, input.value);
      form.remove();
    });
    this.transcriptEl.after(form);
  }
}
