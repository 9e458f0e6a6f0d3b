/**
 * Service entry point. Configuration via environment:
 *
 *   EMBEDSVC_PORT   listen port (default 8078)
 *   EMBEDSVC_MODE   "mock" (default) or "real"
 *   EMBEDSVC_MODEL  model tag for real mode (default Xenova/all-MiniLM-L6-v2)
 *   EMBEDSVC_SEED   mock-mode seed (default 0)
 */

import { buildApp, mockEmbedder } from "./app.js";
import { loadRealEmbedder } from "./real.js";

async function main(): Promise<void> {
  const port = Number(process.env.EMBEDSVC_PORT ?? 8078);
  const mode = process.env.EMBEDSVC_MODE ?? "mock";
  const modelTag = process.env.EMBEDSVC_MODEL ?? "Xenova/all-MiniLM-L6-v2";
  const seed = Number(process.env.EMBEDSVC_SEED ?? 0);

  const embedder =
    mode === "mock" ? mockEmbedder(seed) : await loadRealEmbedder(modelTag);
  const app = buildApp({ embedder, modelTag });
  app.listen(port, () => {
    const status = embedder ? embedder.model : "MODEL UNAVAILABLE (503)";
    console.log(`embedsvc listening on :${port} [${mode}] ${status}`);
  });
}

main().catch((error) => {
  console.error(error);
  process.exit(1);
});
