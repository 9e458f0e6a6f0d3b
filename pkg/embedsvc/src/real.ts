/**
 * Real transformer embedder, loaded lazily.
 *
 * The module named by EMBEDSVC_MODEL_MODULE (default "@xenova/transformers")
 * must expose a `pipeline` factory compatible with the feature-extraction
 * task. Loading happens at startup; if the package or the model weights are
 * unavailable the service still starts, and /embed answers 503 until then.
 * Vectors are mean-pooled final-layer token representations.
 */

import { Embedder } from "./app.js";

type FeatureExtractor = (
  texts: string[],
  options: { pooling: "mean"; normalize: boolean },
) => Promise<{ dims: number[]; data: Float32Array | number[] }>;

export async function loadRealEmbedder(
  modelTag: string,
  moduleName = process.env.EMBEDSVC_MODEL_MODULE ?? "@xenova/transformers",
): Promise<Embedder | null> {
  let extractor: FeatureExtractor;
  try {
    const transformers = await import(moduleName);
    extractor = (await transformers.pipeline("feature-extraction", modelTag)) as FeatureExtractor;
  } catch (error) {
    console.error(`embedsvc: could not load ${modelTag} via ${moduleName}: ${String(error)}`);
    return null;
  }

  const probe = await extractor(["dimension probe"], { pooling: "mean", normalize: false });
  const dims = probe.dims[probe.dims.length - 1];

  return {
    model: `${modelTag} (mean-pooled)`,
    dims,
    async embed(texts: string[]): Promise<number[][]> {
      const output = await extractor(texts, { pooling: "mean", normalize: false });
      const flat = Array.from(output.data as ArrayLike<number>);
      const vectors: number[][] = [];
      for (let i = 0; i < texts.length; i += 1) {
        vectors.push(flat.slice(i * dims, (i + 1) * dims));
      }
      return vectors;
    },
  };
}
