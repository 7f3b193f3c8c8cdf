/**
 * Annotation tooltip anchored at the highlighted word: one section per
 * part of speech, each listing numbered definitions and ranked synonyms.
 */

import type { Tooltip } from "./api.js";

export const TOOLTIP_ID = "annotation-tooltip";

export function removeTooltip(): void {
  document.getElementById(TOOLTIP_ID)?.remove();
}

export function renderTooltip(payload: Tooltip, anchor: HTMLElement): HTMLElement {
  removeTooltip();
  const tooltip = document.createElement("div");
  tooltip.id = TOOLTIP_ID;
  tooltip.className = "tooltip";

  const word = document.createElement("strong");
  word.className = "tooltip-word";
  word.textContent = payload.word;
  tooltip.appendChild(word);

  for (const [pos, entry] of Object.entries(payload.per_pos)) {
    const section = document.createElement("section");
    section.className = "tooltip-pos";
    section.setAttribute("data-pos", pos);

    const heading = document.createElement("h4");
    heading.textContent = pos;
    section.appendChild(heading);

    const definitions = document.createElement("ol");
    definitions.className = "tooltip-definitions";
    for (const definition of entry.definitions) {
      const item = document.createElement("li");
      item.value = definition.sense;
      item.textContent = definition.gloss;
      definitions.appendChild(item);
    }
    section.appendChild(definitions);

    if (entry.synonyms.length) {
      const synonyms = document.createElement("ul");
      synonyms.className = "tooltip-synonyms";
      for (const synonym of entry.synonyms) {
        const item = document.createElement("li");
        item.textContent = `${synonym.lemma} (${synonym.score.toFixed(2)})`;
        item.setAttribute("data-lemma", synonym.lemma);
        synonyms.appendChild(item);
      }
      section.appendChild(synonyms);
    }
    tooltip.appendChild(section);
  }

  // position just under the anchor; fixed so it survives scrolling
  const rect = anchor.getBoundingClientRect();
  tooltip.style.position = "fixed";
  tooltip.style.left = `${rect.left}px`;
  tooltip.style.top = `${rect.bottom + 4}px`;

  document.body.appendChild(tooltip);
  return tooltip;
}
