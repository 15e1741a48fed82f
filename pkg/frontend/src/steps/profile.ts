/**
 * Step 1: declare the system's capabilities (13 checkboxes grouped by the
 * three categories) and the impact context. Submit derives the applicable
 * risks server-side and shows the count before the assessment is created.
 */
import type { ProfileDoc } from "../api.js";
import type { WizardContext } from "../context.js";
import { ApiError } from "../api.js";

const CATEGORIES = ["Cognitive", "Interaction", "Operational"] as const;

const CONTEXT_FIELDS = [
    ["domain", "Domain"],
    ["use_case", "Use case"],
    ["data_sensitivity", "Data sensitivity"],
    ["system_criticality", "System criticality"],
] as const;

function collectProfile(root: HTMLElement): ProfileDoc {
    const name = root.querySelector<HTMLInputElement>("#system-name")!.value.trim();
    const description = root.querySelector<HTMLTextAreaElement>("#system-description")!.value;
    const capabilities = Array.from(
        root.querySelectorAll<HTMLInputElement>("input[data-capability]:checked"),
    ).map((el) => el.dataset.capability!);
    const context = {
        domain: "",
        use_case: "",
        data_sensitivity: "",
        system_criticality: "",
    };
    for (const [key] of CONTEXT_FIELDS) {
        context[key] = root.querySelector<HTMLInputElement>(`#context-${key}`)!.value;
    }
    return { system_name: name, description, capabilities, context };
}

export function renderProfileStep(container: HTMLElement, ctx: WizardContext): void {
    const state = ctx.store.get();
    const catalog = state.catalog!;
    const existing = state.assessment?.profile ?? null;

    container.innerHTML = `
      <h2>1. Capability profile</h2>
      <p class="hint">Component and design risks always apply; declaring a
      capability adds its risks to the assessment.</p>
      <label for="system-name">System name</label>
      <input id="system-name" type="text" value="${existing?.system_name ?? ""}" />
      <label for="system-description">Description</label>
      <textarea id="system-description">${existing?.description ?? ""}</textarea>
      <fieldset id="capabilities"><legend>Capabilities</legend></fieldset>
      <fieldset id="context"><legend>Impact context</legend></fieldset>
      <button id="derive" type="button">Derive applicable risks</button>
      <div id="derive-result" class="derive-result"></div>
    `;

    const capabilityBox = container.querySelector("#capabilities")!;
    for (const category of CATEGORIES) {
        const group = document.createElement("div");
        group.className = "capability-group";
        const heading = document.createElement("h3");
        heading.textContent = category;
        group.appendChild(heading);
        for (const element of catalog.elements.filter((e) => e.category === category)) {
            const label = document.createElement("label");
            label.className = "capability";
            const input = document.createElement("input");
            input.type = "checkbox";
            input.dataset.capability = element.token;
            input.checked = existing?.capabilities.includes(element.token) ?? false;
            input.disabled = existing !== null;
            label.appendChild(input);
            label.appendChild(document.createTextNode(` ${element.name}`));
            label.title = element.description;
            group.appendChild(label);
        }
        capabilityBox.appendChild(group);
    }

    const contextBox = container.querySelector("#context")!;
    for (const [key, title] of CONTEXT_FIELDS) {
        const label = document.createElement("label");
        label.textContent = title;
        label.htmlFor = `context-${key}`;
        const input = document.createElement("input");
        input.type = "text";
        input.id = `context-${key}`;
        input.value = existing?.context[key] ?? "";
        input.disabled = existing !== null;
        contextBox.appendChild(label);
        contextBox.appendChild(input);
    }

    const deriveButton = container.querySelector<HTMLButtonElement>("#derive")!;
    const result = container.querySelector<HTMLElement>("#derive-result")!;

    if (existing !== null) {
        deriveButton.disabled = true;
        result.innerHTML = `
          <p><span id="applicable-count">${state.assessment!.applicable_risk_ids.length}</span>
          applicable risks derived for this assessment.</p>
          <button id="to-ratings" type="button">Continue to ratings</button>`;
        result
            .querySelector("#to-ratings")!
            .addEventListener("click", () => ctx.store.goTo("ratings"));
        return;
    }

    deriveButton.addEventListener("click", async () => {
        const profile = collectProfile(container);
        if (!profile.system_name) {
            ctx.store.set({ error: "system name is required" });
            return;
        }
        let derived: { risk_ids: string[] };
        try {
            derived = await ctx.api.derive(ctx.registerId, profile);
        } catch (err) {
            const message = err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
            ctx.store.set({ error: message });
            return;
        }
        ctx.store.set({ error: null });
        result.innerHTML = `
          <p><span id="applicable-count">${derived.risk_ids.length}</span>
          risks will need rating.</p>
          <button id="start" type="button">Start assessment</button>`;
        result.querySelector("#start")!.addEventListener("click", async () => {
            try {
                const entity = await ctx.api.createAssessment(ctx.registerId, profile, {
                    impact_min: 3,
                    likelihood_min: 3,
                });
                ctx.store.adoptAssessment(entity);
                ctx.store.markDirty("profile", false);
                ctx.store.goTo("ratings");
            } catch (err) {
                const message =
                    err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
                ctx.store.set({ error: message });
            }
        });
    });
}
