/**
 * Teacher monitor: activity table for the teacher's course plus a
 * compose box that posts instructions to a group's message thread.
 * Non-teachers are routed back to the search page on a permission error.
 */

import type { ActivityEvent, ApiClient } from "./api.js";
import { ApiError } from "./api.js";

export function renderActivityTable(
  container: HTMLElement,
  events: ActivityEvent[],
): void {
  container.textContent = "";
  const table = document.createElement("table");
  table.className = "activity-table";
  const head = table.createTHead().insertRow();
  for (const label of ["When", "User", "Kind", "Details"]) {
    const th = document.createElement("th");
    th.textContent = label;
    head.appendChild(th);
  }
  const body = table.createTBody();
  for (const event of events) {
    const row = body.insertRow();
    row.setAttribute("data-event-id", event.id);
    row.insertCell().textContent = new Date(event.at * 1000).toISOString();
    row.insertCell().textContent = event.user_id;
    row.insertCell().textContent = event.kind;
    row.insertCell().textContent = JSON.stringify(event.payload);
  }
  container.appendChild(table);
}

export class MonitorController {
  constructor(
    private client: ApiClient,
    private tableEl: HTMLElement,
    private onDenied: () => void,
  ) {}

  /** Loads course activity; routes non-teachers away via onDenied. */
  async load(filter: { kind?: string; since?: number } = {}): Promise<boolean> {
    try {
      const { events } = await this.client.activity(filter);
      renderActivityTable(this.tableEl, events);
      return true;
    } catch (err) {
      if (err instanceof ApiError && err.status === 403) {
        this.onDenied();
        return false;
      }
      throw err;
    }
  }

  attachComposeBox(form: HTMLFormElement, groupId: string): void {
    form.addEventListener("submit", async (event) => {
      event.preventDefault();
      const input = form.querySelector<HTMLInputElement>("input[name=text]");
      if (!input || !input.value.trim()) return;
      await this.client.sendMessage(groupId, input.value);
      input.value = "";
    });
  }
}
