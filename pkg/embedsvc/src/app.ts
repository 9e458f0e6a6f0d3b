import express, { Express } from "express";
import { z } from "zod";

import { MOCK_DIMS, MOCK_MODEL_TAG, mockVector } from "./mock.js";

export const MAX_TEXTS = 256;
export const MAX_TEXT_BYTES = 8192;

/** Anything that can turn a batch of texts into vectors. */
export interface Embedder {
  model: string;
  dims: number;
  embed(texts: string[]): Promise<number[][]>;
}

export function mockEmbedder(seed: number): Embedder {
  return {
    model: MOCK_MODEL_TAG,
    dims: MOCK_DIMS,
    async embed(texts: string[]): Promise<number[][]> {
      return texts.map((text) => mockVector(text, seed, MOCK_DIMS));
    },
  };
}

const embedRequestSchema = z.object({
  texts: z.array(z.string()).min(1).max(MAX_TEXTS),
});

export interface AppOptions {
  embedder: Embedder | null; // null = model failed to load (real mode)
  modelTag: string;
}

export function buildApp(options: AppOptions): Express {
  const app = express();
  app.use(express.json({ limit: "32mb" }));

  app.get("/health", (_req, res) => {
    if (!options.embedder) {
      res.status(503).json({ status: "error", model: options.modelTag, dims: 0 });
      return;
    }
    res.json({
      status: "ok",
      model: options.embedder.model,
      dims: options.embedder.dims,
    });
  });

  app.post("/embed", (req, res) => {
    const parsed = embedRequestSchema.safeParse(req.body);
    if (!parsed.success) {
      res.status(400).json({
        error: "bad_request",
        message: `texts must be an array of 1..${MAX_TEXTS} strings`,
      });
      return;
    }
    const oversize = parsed.data.texts.findIndex(
      (text) => Buffer.byteLength(text, "utf8") > MAX_TEXT_BYTES,
    );
    if (oversize >= 0) {
      res.status(400).json({
        error: "bad_request",
        message: `texts[${oversize}] exceeds ${MAX_TEXT_BYTES} bytes`,
      });
      return;
    }
    if (!options.embedder) {
      res.status(503).json({
        error: "model_unavailable",
        message: `model ${options.modelTag} failed to load`,
      });
      return;
    }
    const embedder = options.embedder;
    embedder
      .embed(parsed.data.texts)
      .then((vectors) => {
        res.json({ model: embedder.model, dims: embedder.dims, vectors });
      })
      .catch((error: unknown) => {
        res.status(500).json({ error: "embedding_failed", message: String(error) });
      });
  });

  // Malformed JSON bodies should read as client errors, not a stack trace.
  app.use(
    (err: unknown, _req: express.Request, res: express.Response, next: express.NextFunction) => {
      if (err instanceof SyntaxError) {
        res.status(400).json({ error: "bad_request", message: "invalid JSON body" });
        return;
      }
      next(err);
    },
  );

  return app;
}
