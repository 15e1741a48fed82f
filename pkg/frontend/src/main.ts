import { Api } from "./api.js";
import { WizardStore } from "./store.js";
import { renderWizard } from "./wizard.js";

/**
 * Boot the wizard against the hosting service (same origin by default;
 * ?api=http://host:port overrides). ?register=<id> picks the register;
 * with exactly one stored register it is chosen automatically.
 */
export async function boot(root: HTMLElement): Promise<void> {
    const params = new URLSearchParams(window.location.search);
    const api = new Api(params.get("api") ?? "");
    const store = new WizardStore();

    const catalog = await api.catalog();
    let registerId = params.get("register");
    if (!registerId) {
        const registers = await api.listRegisters();
        if (registers.items.length !== 1) {
            root.textContent =
                "Pass ?register=<stored id> to choose a register " +
                `(${registers.items.length} available).`;
            return;
        }
        registerId = registers.items[0].id;
    }
    const register = await api.getRegister(registerId);
    store.set({ catalog, register: register.payload, registerId });

    const resume = params.get("assessment");
    if (resume) {
        store.adoptAssessment(await api.getAssessment(resume));
    }

    renderWizard(root, { api, store, registerId });
}

const mount = document.getElementById("app");
if (mount) {
    boot(mount).catch((err) => {
        mount.textContent = `failed to start: ${err}`;
    });
}
