import * as tf from "@tensorflow/tfjs";
import { Window } from "./iq";

export interface CnnConfig {
    windowLen: number;
    numClasses: number;
    filters: number;
    kernel: number;
    hidden: number;
    epochs: number;
    batchSize: number;
    seed: number;
}

export const DEFAULT_CNN: CnnConfig = {
    windowLen: 256, numClasses: 4, filters: 16, kernel: 7,
    hidden: 64, epochs: 16, batchSize: 64, seed: 0,
};

/** Two conv/pool stages over [W, 2] I/Q planes, then dense softmax. */
export function buildCnn(cfg: CnnConfig): tf.LayersModel {
    const model = tf.sequential();
    model.add(tf.layers.conv1d({
        inputShape: [cfg.windowLen, 2], filters: cfg.filters, kernelSize: cfg.kernel,
        activation: "relu",
        kernelInitializer: tf.initializers.heNormal({ seed: cfg.seed }),
    }));
    model.add(tf.layers.maxPooling1d({ poolSize: 2 }));
    model.add(tf.layers.conv1d({
        filters: cfg.filters, kernelSize: cfg.kernel, activation: "relu",
        kernelInitializer: tf.initializers.heNormal({ seed: cfg.seed + 1 }),
    }));
    model.add(tf.layers.maxPooling1d({ poolSize: 2 }));
    model.add(tf.layers.flatten());
    model.add(tf.layers.dense({
        units: cfg.hidden, activation: "relu",
        kernelInitializer: tf.initializers.heNormal({ seed: cfg.seed + 2 }),
    }));
    model.add(tf.layers.dense({
        units: cfg.numClasses, activation: "softmax",
        kernelInitializer: tf.initializers.heNormal({ seed: cfg.seed + 3 }),
    }));
    model.compile({
        optimizer: tf.train.adam(1e-3),
        loss: "sparseCategoricalCrossentropy",
        metrics: ["accuracy"],
    });
    return model;
}

export function windowsToTensors(windows: Window[]): { x: tf.Tensor3D; y: tf.Tensor1D } {
    const w = windows[0].i.length;
    const data = new Float32Array(windows.length * w * 2);
    const labels = new Float32Array(windows.length);  // sparse CE expects floats
    windows.forEach((win, n) => {
        for (let k = 0; k < w; k++) {
            data[n * w * 2 + k * 2] = win.i[k];
            data[n * w * 2 + k * 2 + 1] = win.q[k];
        }
        labels[n] = win.label;
    });
    return {
        x: tf.tensor3d(data, [windows.length, w, 2]),
        y: tf.tensor1d(labels, "float32"),
    };
}

export async function trainCnn(model: tf.LayersModel, windows: Window[],
                               cfg: CnnConfig): Promise<void> {
    const { x, y } = windowsToTensors(windows);
    try {
        await model.fit(x, y, {
            epochs: cfg.epochs,
            batchSize: cfg.batchSize,
            shuffle: true,
            verbose: 0,
        });
    } finally {
        x.dispose();
        y.dispose();
    }
}

export function accuracy(model: tf.LayersModel, windows: Window[]): number {
    const { x, y } = windowsToTensors(windows);
    try {
        const logits = model.predict(x) as tf.Tensor;
        const predictions = logits.argMax(-1).toFloat();
        const matches = predictions.equal(y).sum().dataSync()[0];
        logits.dispose();
        predictions.dispose();
        return matches / windows.length;
    } finally {
        x.dispose();
        y.dispose();
    }
}
