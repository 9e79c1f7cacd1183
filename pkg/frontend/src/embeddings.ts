/**
 * 2-D embeddings of feature vectors: principal components, or a compact
 * stochastic neighbor embedding (plain O(N^2) gradient descent with a
 * Student-t low-dimensional kernel, fixed seed, inputs subsampled upstream).
 */

export type EmbeddingMethod = "pca" | "tsne";

function mulberry32(seed: number): () => number {
    let a = seed >>> 0;
    return () => {
        a |= 0; a = (a + 0x6d2b79f5) | 0;
        let t = Math.imul(a ^ (a >>> 15), 1 | a);
        t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
        return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
    };
}

function center(vectors: number[][]): number[][] {
    const dims = vectors[0].length;
    const mean = new Array(dims).fill(0);
    for (const v of vectors) for (let d = 0; d < dims; d++) mean[d] += v[d];
    for (let d = 0; d < dims; d++) mean[d] /= vectors.length;
    return vectors.map((v) => v.map((x, d) => x - mean[d]));
}

/** Top-2 principal components via power iteration with deflation. */
export function pca2(vectors: number[][], seed = 1): number[][] {
    const data = center(vectors);
    const dims = data[0].length;
    const rand = mulberry32(seed);

    const project = (w: number[]): number[] => data.map(
        (v) => v.reduce((s, x, d) => s + x * w[d], 0));

    const component = (deflate?: number[]): number[] => {
        let w = Array.from({ length: dims }, () => rand() - 0.5);
        for (let iter = 0; iter < 100; iter++) {
            if (deflate) {
                const dot = w.reduce((s, x, d) => s + x * deflate[d], 0);
                w = w.map((x, d) => x - dot * deflate[d]);
            }
            const scores = project(w);
            const next = new Array(dims).fill(0);
            data.forEach((v, n) => {
                for (let d = 0; d < dims; d++) next[d] += scores[n] * v[d];
            });
            const norm = Math.hypot(...next) || 1;
            w = next.map((x) => x / norm);
        }
        return w;
    };

    const w1 = component();
    const w2 = component(w1);
    const s1 = project(w1);
    const s2 = project(w2);
    return s1.map((x, n) => [x, s2[n]]);
}

function sqDists(vectors: number[][]): number[][] {
    const n = vectors.length;
    const d = Array.from({ length: n }, () => new Array(n).fill(0));
    for (let a = 0; a < n; a++) {
        for (let b = a + 1; b < n; b++) {
            let s = 0;
            const va = vectors[a], vb = vectors[b];
            for (let k = 0; k < va.length; k++) { const diff = va[k] - vb[k]; s += diff * diff; }
            d[a][b] = s; d[b][a] = s;
        }
    }
    return d;
}

/** Row-wise Gaussian affinities; bandwidth bisected to hit the perplexity. */
function affinities(dist: number[][], perplexity: number): number[][] {
    const n = dist.length;
    const target = Math.log(perplexity);
    const p = Array.from({ length: n }, () => new Array(n).fill(0));
    for (let a = 0; a < n; a++) {
        let lo = 0, hi = Infinity, beta = 1.0;
        for (let iter = 0; iter < 60; iter++) {
            let sum = 0, weighted = 0;
            for (let b = 0; b < n; b++) {
                if (b === a) continue;
                const w = Math.exp(-dist[a][b] * beta);
                p[a][b] = w; sum += w; weighted += w * dist[a][b];
            }
            if (sum <= 0) { beta /= 2; continue; }
            const entropy = Math.log(sum) + beta * weighted / sum;
            if (Math.abs(entropy - target) < 1e-4) break;
            if (entropy > target) {        // too spread out: tighten
                lo = beta;
                beta = hi === Infinity ? beta * 2 : (beta + hi) / 2;
            } else {
                hi = beta;
                beta = (beta + lo) / 2;
            }
        }
        let sum = 0;
        for (let b = 0; b < n; b++) sum += p[a][b];
        for (let b = 0; b < n; b++) p[a][b] = sum > 0 ? p[a][b] / sum : 0;
    }
    for (let a = 0; a < n; a++) {
        for (let b = a + 1; b < n; b++) {
            const v = (p[a][b] + p[b][a]) / (2 * n);
            p[a][b] = v; p[b][a] = v;
        }
    }
    return p;
}

/** Stochastic neighbor embedding with momentum and gain adaptation. */
export function sne2(vectors: number[][], seed = 1, perplexity = 20,
                     iterations = 300): number[][] {
    const n = vectors.length;
    if (n < 3) throw new Error("need at least 3 points to embed");
    const p = affinities(sqDists(vectors), Math.max(2, Math.min(perplexity, (n - 1) / 3)));
    const rand = mulberry32(seed);
    const y = Array.from({ length: n }, () => [0.1 * (rand() - 0.5), 0.1 * (rand() - 0.5)]);
    const gains = Array.from({ length: n }, () => [1, 1]);
    const vel = Array.from({ length: n }, () => [0, 0]);
    const lr = 100;

    for (let iter = 0; iter < iterations; iter++) {
        const exaggeration = iter < 80 ? 4 : 1;
        const num = Array.from({ length: n }, () => new Array(n).fill(0));
        let qSum = 0;
        for (let a = 0; a < n; a++) {
            for (let b = a + 1; b < n; b++) {
                const dx = y[a][0] - y[b][0], dy = y[a][1] - y[b][1];
                const w = 1 / (1 + dx * dx + dy * dy);
                num[a][b] = w; num[b][a] = w; qSum += 2 * w;
            }
        }
        const momentum = iter < 100 ? 0.5 : 0.8;
        for (let a = 0; a < n; a++) {
            let gx = 0, gy = 0;
            for (let b = 0; b < n; b++) {
                if (a === b) continue;
                const q = Math.max(num[a][b] / qSum, 1e-12);
                const mult = (exaggeration * p[a][b] - q) * num[a][b];
                gx += 4 * mult * (y[a][0] - y[b][0]);
                gy += 4 * mult * (y[a][1] - y[b][1]);
            }
            const grad = [gx, gy];
            for (let d = 0; d < 2; d++) {
                gains[a][d] = Math.sign(grad[d]) === Math.sign(vel[a][d])
                    ? Math.max(gains[a][d] * 0.8, 0.01)
                    : gains[a][d] + 0.2;
                vel[a][d] = momentum * vel[a][d] - lr * gains[a][d] * grad[d];
                y[a][d] += vel[a][d];
            }
        }
    }
    return y;
}

export function embed(vectors: number[][], method: EmbeddingMethod,
                      seed = 1): number[][] {
    if (method === "pca") return pca2(vectors, seed);
    return sne2(vectors, seed);
}
