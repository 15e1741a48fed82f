/**
 * Step 5: record residual-risk notes (what the controls still leave open)
 * and mark each as accepted or follow it up. Finalize later refuses while
 * a note is neither accepted nor followed up.
 */
import type { WizardContext } from "../context.js";
import { refreshAssessment, runMutation } from "../context.js";
import { unresolvedNotes } from "../store.js";

export function renderResidualStep(container: HTMLElement, ctx: WizardContext): void {
    const state = ctx.store.get();
    const assessment = state.assessment!;
    const open = new Set(unresolvedNotes(assessment));

    container.innerHTML = `
      <h2>5. Residual risk</h2>
      <p class="hint">Controls rarely neutralize everything: note the risk
      that remains (for example, guardrails that may not generalize, or
      capability interactions) and record who accepted it.</p>
      <ul id="notes"></ul>
      <div class="note-form">
        <label>Note <input id="note-text" type="text" /></label>
        <label><input id="note-accepted" type="checkbox" /> accepted</label>
        <label>Approver <input id="note-approver" type="text" /></label>
        <button id="add-note" type="button">Add note</button>
      </div>
      <button id="to-review" type="button">Continue to review</button>
    `;

    const list = container.querySelector<HTMLElement>("#notes")!;
    if (assessment.residual_notes.length === 0) {
        list.innerHTML = '<li class="empty">no residual notes recorded</li>';
    }
    assessment.residual_notes.forEach((note, index) => {
        const item = document.createElement("li");
        item.className = "note";
        item.dataset.index = String(index);
        const flag = note.accepted
            ? `accepted by ${note.approver}`
            : open.has(index)
              ? "open"
              : "followed up";
        item.innerHTML = `
          <span class="note-state">[${flag}]</span> ${note.text}
          ${note.follow_up_of !== null ? `<em>(follow-up of #${note.follow_up_of})</em>` : ""}
        `;
        if (!note.accepted && open.has(index)) {
            const approver = document.createElement("input");
            approver.type = "text";
            approver.placeholder = "approver";
            approver.className = "note-approver";
            const acceptButton = document.createElement("button");
            acceptButton.type = "button";
            acceptButton.className = "accept-note";
            acceptButton.textContent = "Accept";
            acceptButton.addEventListener("click", async () => {
                const ok = await runMutation(ctx, () =>
                    ctx.api.acceptNote(
                        assessment.id,
                        ctx.store.get().revision,
                        index,
                        approver.value,
                    ),
                );
                if (!ok) return;
                await refreshAssessment(ctx);
                renderResidualStep(container, ctx);
            });
            item.appendChild(approver);
            item.appendChild(acceptButton);
        }
        list.appendChild(item);
    });

    container.querySelector<HTMLButtonElement>("#add-note")!.addEventListener("click", async () => {
        const text = container.querySelector<HTMLInputElement>("#note-text")!.value;
        const accepted = container.querySelector<HTMLInputElement>("#note-accepted")!.checked;
        const approver = container.querySelector<HTMLInputElement>("#note-approver")!.value;
        const ok = await runMutation(ctx, () =>
            ctx.api.addNote(assessment.id, ctx.store.get().revision, text, accepted, approver),
        );
        if (!ok) return;
        await refreshAssessment(ctx);
        renderResidualStep(container, ctx);
    });

    container
        .querySelector<HTMLButtonElement>("#to-review")!
        .addEventListener("click", () => ctx.store.goTo("review"));
}
