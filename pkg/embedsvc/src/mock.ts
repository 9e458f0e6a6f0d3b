/**
 * Deterministic mock embeddings.
 *
 * The scheme must stay bit-identical with the Python pipeline's
 * causaforge.mockembed module (a shared checksum fixture pins both sides):
 *
 *   block_k = SHA256( seed as 8 big-endian bytes || SHA256(text) || k as 4 big-endian bytes )
 *
 * Big-endian 32-bit words from the blocks become components via
 * u / 2^32 * 2 - 1 (exact in IEEE-754 doubles), then the vector is
 * L2-normalized with the sum accumulated in index order. Every step is exact
 * or correctly rounded, so any conforming runtime produces the same bytes.
 */

import { createHash } from "node:crypto";

export const MOCK_DIMS = 64;
export const MOCK_MODEL_TAG = "mock-sha256-meanfree-v1";

export function mockVector(text: string, seed = 0, dims: number = MOCK_DIMS): number[] {
  if (dims < 1) {
    throw new RangeError("dims must be >= 1");
  }
  const textHash = createHash("sha256").update(Buffer.from(text, "utf8")).digest();
  const seedBytes = Buffer.alloc(8);
  seedBytes.writeBigUInt64BE(BigInt.asUintN(64, BigInt(seed)));

  const words: number[] = [];
  let block = 0;
  while (words.length < dims) {
    const blockBytes = Buffer.alloc(4);
    blockBytes.writeUInt32BE(block, 0);
    const digest = createHash("sha256")
      .update(Buffer.concat([seedBytes, textHash, blockBytes]))
      .digest();
    for (let offset = 0; offset < 32; offset += 4) {
      words.push(digest.readUInt32BE(offset));
    }
    block += 1;
  }

  const components = words.slice(0, dims).map((w) => (w / 4294967296) * 2 - 1);
  let normSq = 0;
  for (const value of components) {
    normSq += value * value;
  }
  if (normSq === 0) {
    components[0] = 1;
    normSq = 1;
  }
  const norm = Math.sqrt(normSq);
  return components.map((value) => value / norm);
}

/** SHA-256 over the raw little-endian float64 bytes of all components. */
export function vectorsChecksum(vectors: number[][]): string {
  const hash = createHash("sha256");
  const scratch = Buffer.alloc(8);
  for (const vector of vectors) {
    for (const component of vector) {
      scratch.writeDoubleLE(component, 0);
      hash.update(scratch);
      // Buffer contents are consumed synchronously by update(); reuse is safe.
    }
  }
  return hash.digest("hex");
}
