"""Sliding-window next-frame strategy prediction with a from-scratch LSTM.

A window is five consecutive frames of all ten champions (5 x 10 x 9 inputs);
the target is the next frame's per-champion coordinates plus behavior one-hot
(10 x 7). The ten champions are flattened into one 90-feature step so
cross-champion context is visible to the recurrence.

Everything runs in float64 on a single thread; training is bit-deterministic
for a fixed seed.
"""

from __future__ import annotations

import base64
import hashlib
import json
from dataclasses import dataclass, field, replace

import numpy as np

from .telemetry import (
    FEATURES_PER_CHAMPION,
    SLOT_COUNT,
    TARGETS_PER_CHAMPION,
    BehaviorClass,
    MatchLog,
    NormalizationStats,
    encode_champion_frame,
)

WINDOW_LEN = 5
INPUT_SIZE = SLOT_COUNT * FEATURES_PER_CHAMPION  # 90
OUTPUT_SIZE = SLOT_COUNT * TARGETS_PER_CHAMPION  # 70

CHECKPOINT_VERSION = 1


class ShapeError(Exception):
    """Input tensor does not have the documented shape."""


class EmptyDataset(Exception):
    """Training or evaluation was asked to run on zero samples."""


class DivergenceError(Exception):
    """Training loss became non-finite."""


@dataclass(frozen=True)
class WindowSample:
    x: np.ndarray  # (5, 10, 9)
    y: np.ndarray  # (10, 7): [x, y, one-hot behavior x5]
    t_target: float
    match_id: str = ""
    frame_index: int = -1  # index of the target frame within its MatchLog


def build_windows(
    log: MatchLog, stats: NormalizationStats, gap_max: float = 2.0
) -> list[WindowSample]:
    """One sample per position with six consecutive frames whose inter-frame
    gaps are all <= gap_max; windows spanning larger gaps are skipped."""
    frames = log.frames
    n = len(frames)
    if n < WINDOW_LEN + 1:
        return []
    encoded = np.stack(
        [
            np.stack([encode_champion_frame(c, stats) for c in f.champions])
            for f in frames
        ]
    )  # (n, 10, 9)
    samples = []
    for i in range(WINDOW_LEN, n):
        ts = [frames[j].t for j in range(i - WINDOW_LEN, i + 1)]
        if any(t1 - t0 > gap_max for t0, t1 in zip(ts, ts[1:])):
            continue
        y = np.zeros((SLOT_COUNT, TARGETS_PER_CHAMPION))
        for slot, champ in enumerate(frames[i].champions):
            y[slot, 0] = champ.global_pos[0]
            y[slot, 1] = champ.global_pos[1]
            y[slot, 2 + int(champ.behavior)] = 1.0
        samples.append(
            WindowSample(
                x=encoded[i - WINDOW_LEN : i].copy(),
                y=y,
                t_target=frames[i].t,
                match_id=log.match_id,
                frame_index=i,
            )
        )
    return samples


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 1000
    batch_size: int = 16
    learning_rate: float = 3e-4
    seed: int = 0


@dataclass
class LstmParams:
    """Single-layer LSTM plus linear head. Gate layout along the 4H axis is
    [input, forget, cell, output]."""

    w_x: np.ndarray  # (90, 4H)
    w_h: np.ndarray  # (H, 4H)
    b: np.ndarray  # (4H,)
    w_out: np.ndarray  # (H, 70)
    b_out: np.ndarray  # (70,)

    @property
    def hidden_size(self) -> int:
        return self.w_h.shape[0]

    def blocks(self) -> dict[str, np.ndarray]:
        return {"w_x": self.w_x, "w_h": self.w_h, "b": self.b,
                "w_out": self.w_out, "b_out": self.b_out}

    def copy(self) -> "LstmParams":
        return LstmParams(**{k: v.copy() for k, v in self.blocks().items()})


@dataclass
class PredictorModel:
    params: LstmParams
    stats: NormalizationStats
    config: TrainConfig = field(default_factory=TrainConfig)
    temperature: float = 1.0


def init_model(
    stats: NormalizationStats,
    hidden_size: int = 128,
    seed: int = 0,
    config: TrainConfig | None = None,
) -> PredictorModel:
    rng = np.random.default_rng(seed)
    h = hidden_size
    scale = 1.0 / np.sqrt(INPUT_SIZE)
    params = LstmParams(
        w_x=rng.normal(0.0, scale, size=(INPUT_SIZE, 4 * h)),
        w_h=rng.normal(0.0, 1.0 / np.sqrt(h), size=(h, 4 * h)),
        b=np.zeros(4 * h),
        w_out=rng.normal(0.0, 1.0 / np.sqrt(h), size=(h, OUTPUT_SIZE)),
        b_out=np.zeros(OUTPUT_SIZE),
    )
    # forget-gate bias at 1 is the usual stabilizer
    params.b[h : 2 * h] = 1.0
    return PredictorModel(params=params, stats=stats, config=config or TrainConfig())


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def _forward_batch(params: LstmParams, xb: np.ndarray, keep_cache: bool = False):
    """xb: (B, 5, 90) -> out (B, 70) and, optionally, the BPTT cache."""
    bsz = xb.shape[0]
    h_size = params.hidden_size
    h = np.zeros((bsz, h_size))
    c = np.zeros((bsz, h_size))
    cache = []
    for t in range(xb.shape[1]):
        x_t = xb[:, t, :]
        z = x_t @ params.w_x + h @ params.w_h + params.b
        i = _sigmoid(z[:, :h_size])
        f = _sigmoid(z[:, h_size : 2 * h_size])
        g = np.tanh(z[:, 2 * h_size : 3 * h_size])
        o = _sigmoid(z[:, 3 * h_size :])
        c_new = f * c + i * g
        tc = np.tanh(c_new)
        h_new = o * tc
        if keep_cache:
            cache.append((x_t, h, c, i, f, g, o, tc))
        h, c = h_new, c_new
    out = h @ params.w_out + params.b_out
    if keep_cache:
        return out, (cache, h)
    return out


def _loss_from_out(out: np.ndarray, yb: np.ndarray):
    """out: (B, 70), yb: (B, 10, 7). Returns (loss, d_out).

    Loss is MSE over the 20 raw coordinate outputs plus mean per-champion
    cross-entropy over behavior logits.
    """
    bsz = out.shape[0]
    out3 = out.reshape(bsz, SLOT_COUNT, TARGETS_PER_CHAMPION)
    coords = out3[:, :, :2]
    logits = out3[:, :, 2:]
    y_coords = yb[:, :, :2]
    y_onehot = yb[:, :, 2:]

    coord_err = coords - y_coords
    coord_loss = np.mean(coord_err**2)

    probs = _softmax(logits)
    ce = -np.sum(y_onehot * np.log(np.maximum(probs, 1e-300))) / (bsz * SLOT_COUNT)
    loss = coord_loss + ce

    d_out3 = np.zeros_like(out3)
    d_out3[:, :, :2] = 2.0 * coord_err / coord_err.size
    d_out3[:, :, 2:] = (probs - y_onehot) / (bsz * SLOT_COUNT)
    return loss, d_out3.reshape(bsz, OUTPUT_SIZE)


def _loss_and_grads(params: LstmParams, xb: np.ndarray, yb: np.ndarray):
    out, (cache, h_last) = _forward_batch(params, xb, keep_cache=True)
    loss, d_out = _loss_from_out(out, yb)

    h_size = params.hidden_size
    grads = {k: np.zeros_like(v) for k, v in params.blocks().items()}
    grads["w_out"] = h_last.T @ d_out
    grads["b_out"] = d_out.sum(axis=0)

    dh = d_out @ params.w_out.T
    dc = np.zeros_like(dh)
    for t in range(len(cache) - 1, -1, -1):
        x_t, h_prev, c_prev, i, f, g, o, tc = cache[t]
        do = dh * tc
        dc = dc + dh * o * (1.0 - tc**2)
        di = dc * g
        dg = dc * i
        df = dc * c_prev
        dz = np.concatenate(
            [
                di * i * (1.0 - i),
                df * f * (1.0 - f),
                dg * (1.0 - g**2),
                do * o * (1.0 - o),
            ],
            axis=1,
        )
        grads["w_x"] += x_t.T @ dz
        grads["w_h"] += h_prev.T @ dz
        grads["b"] += dz.sum(axis=0)
        dh = dz @ params.w_h.T
        dc = dc * f
    return loss, grads


def batch_loss(params: LstmParams, xb: np.ndarray, yb: np.ndarray) -> float:
    out = _forward_batch(params, xb)
    loss, _ = _loss_from_out(out, yb)
    return float(loss)


@dataclass(frozen=True)
class StrategyPrediction:
    coords: tuple[float, float]
    behavior_probs: np.ndarray  # (5,)
    top_k: tuple[tuple[BehaviorClass, float], ...]

    @property
    def top1(self) -> BehaviorClass:
        return self.top_k[0][0]

    @property
    def top1_prob(self) -> float:
        return self.top_k[0][1]


def _predictions_from_out(out_row: np.ndarray, temperature: float) -> list[StrategyPrediction]:
    out3 = out_row.reshape(SLOT_COUNT, TARGETS_PER_CHAMPION)
    preds = []
    for slot in range(SLOT_COUNT):
        coords = (
            float(np.clip(out3[slot, 0], 0.0, 1.0)),
            float(np.clip(out3[slot, 1], 0.0, 1.0)),
        )
        probs = _softmax(out3[slot, 2:] / temperature)
        order = sorted(range(5), key=lambda k: (-probs[k], k))  # index breaks ties
        top_k = tuple((BehaviorClass(k), float(probs[k])) for k in order)
        preds.append(StrategyPrediction(coords=coords, behavior_probs=probs, top_k=top_k))
    return preds


def forward(model: PredictorModel, x: np.ndarray) -> list[StrategyPrediction]:
    """Per-champion prediction for one window. Coordinates are clamped to the
    unit square; behavior probabilities are a softmax over each champion's
    five logits."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (WINDOW_LEN, SLOT_COUNT, FEATURES_PER_CHAMPION):
        raise ShapeError(f"expected (5, 10, 9) window, got {x.shape}")
    out = _forward_batch(model.params, x.reshape(1, WINDOW_LEN, INPUT_SIZE))
    return _predictions_from_out(out[0], model.temperature)


def _stack(samples: list[WindowSample]) -> tuple[np.ndarray, np.ndarray]:
    xb = np.stack([s.x.reshape(WINDOW_LEN, INPUT_SIZE) for s in samples])
    yb = np.stack([s.y for s in samples])
    return xb, yb


@dataclass
class TrainReport:
    loss_curve: list[float]
    mse: float
    mae: float
    top1_accuracy: float


def train(
    model: PredictorModel, samples: list[WindowSample], config: TrainConfig | None = None
) -> tuple[PredictorModel, TrainReport]:
    """Adam on the summed coordinate-MSE + behavior cross-entropy loss.
    Deterministic for a fixed config seed."""
    if not samples:
        raise EmptyDataset("no training samples")
    cfg = config or model.config
    if cfg.epochs < 1:
        raise ValueError("epochs must be >= 1")
    params = model.params.copy()
    xb_all, yb_all = _stack(samples)
    n = len(samples)
    rng = np.random.default_rng(cfg.seed)

    m = {k: np.zeros_like(v) for k, v in params.blocks().items()}
    v = {k: np.zeros_like(val) for k, val in params.blocks().items()}
    beta1, beta2, eps = 0.9, 0.999, 1e-8
    step = 0
    loss_curve = []
    for _ in range(cfg.epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        n_batches = 0
        for start in range(0, n, cfg.batch_size):
            idx = order[start : start + cfg.batch_size]
            loss, grads = _loss_and_grads(params, xb_all[idx], yb_all[idx])
            if not np.isfinite(loss):
                raise DivergenceError(f"loss became {loss}")
            step += 1
            for key, block in params.blocks().items():
                grad = grads[key]
                m[key] = beta1 * m[key] + (1 - beta1) * grad
                v[key] = beta2 * v[key] + (1 - beta2) * grad**2
                m_hat = m[key] / (1 - beta1**step)
                v_hat = v[key] / (1 - beta2**step)
                block -= cfg.learning_rate * m_hat / (np.sqrt(v_hat) + eps)
            epoch_loss += loss
            n_batches += 1
        loss_curve.append(epoch_loss / n_batches)

    trained = replace(model, params=params, config=cfg)
    result = evaluate(trained, samples)
    report = TrainReport(
        loss_curve=loss_curve,
        mse=result.mse,
        mae=result.mae,
        top1_accuracy=result.top1_accuracy,
    )
    return trained, report


@dataclass(frozen=True)
class EvalResult:
    mse: float
    mae: float
    top1_accuracy: float


def _metrics_from_pred(pred: np.ndarray, yb: np.ndarray) -> EvalResult:
    """pred/yb: (N, 10, 7) with [x, y, probs-or-onehot x5] per champion."""
    err = pred - yb
    mse = float(np.mean(err**2))
    mae = float(np.mean(np.abs(err)))
    acc = float(np.mean(pred[:, :, 2:].argmax(axis=-1) == yb[:, :, 2:].argmax(axis=-1)))
    return EvalResult(mse=mse, mae=mae, top1_accuracy=acc)


def _predicted_tensor(model: PredictorModel, samples: list[WindowSample]) -> np.ndarray:
    xb, _ = _stack(samples)
    pred = np.empty((len(samples), SLOT_COUNT, TARGETS_PER_CHAMPION))
    for start in range(0, len(samples), 512):
        out = _forward_batch(model.params, xb[start : start + 512])
        out3 = out.reshape(-1, SLOT_COUNT, TARGETS_PER_CHAMPION)
        pred[start : start + 512, :, :2] = np.clip(out3[:, :, :2], 0.0, 1.0)
        pred[start : start + 512, :, 2:] = _softmax(out3[:, :, 2:] / model.temperature)
    return pred


def evaluate(model: PredictorModel, samples: list[WindowSample]) -> EvalResult:
    """MSE/MAE over the concatenated 10x7 prediction vs. target, plus top-1
    behavior accuracy. Predicted vectors use clamped coordinates and softmax
    probabilities."""
    if not samples:
        raise EmptyDataset("no evaluation samples")
    _, yb = _stack(samples)
    pred = _predicted_tensor(model, samples)
    return _metrics_from_pred(pred, yb)


def persistence_metrics(samples: list[WindowSample]) -> EvalResult:
    """Baseline that repeats the last input frame's coordinates and behavior."""
    if not samples:
        raise EmptyDataset("no evaluation samples")
    _, yb = _stack(samples)
    pred = np.empty_like(yb)
    for n, s in enumerate(samples):
        pred[n, :, 0] = s.x[-1, :, 2]
        pred[n, :, 1] = s.x[-1, :, 3]
        pred[n, :, 2:] = s.x[-1, :, 4:]
    return _metrics_from_pred(pred, yb)


def split_contiguous(
    samples: list[WindowSample], fractions: tuple[float, float, float] = (0.75, 0.05, 0.20)
) -> tuple[list[WindowSample], list[WindowSample], list[WindowSample]]:
    """Contiguous train/val/test split preserving sample order (and thus match
    boundaries when samples are concatenated per match)."""
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise ValueError("fractions must sum to 1")
    n = len(samples)
    n_train = int(n * fractions[0])
    n_val = int(n * fractions[1])
    return samples[:n_train], samples[n_train : n_train + n_val], samples[n_train + n_val :]


def gradient_check(
    model: PredictorModel,
    sample: WindowSample,
    eps: float = 1e-5,
    n_params: int = 100,
    seed: int = 0,
) -> float:
    """Max relative error between analytic gradients and central finite
    differences on n_params randomly sampled parameters."""
    params = model.params.copy()
    xb, yb = _stack([sample])
    _, grads = _loss_and_grads(params, xb, yb)

    rng = np.random.default_rng(seed)
    blocks = params.blocks()
    sizes = {k: v.size for k, v in blocks.items()}
    total = sum(sizes.values())
    flat_idx = rng.choice(total, size=min(n_params, total), replace=False)

    max_rel = 0.0
    for fi in flat_idx:
        offset = int(fi)
        for key in blocks:
            if offset < sizes[key]:
                break
            offset -= sizes[key]
        block = blocks[key]
        orig = block.flat[offset]
        block.flat[offset] = orig + eps
        loss_plus = batch_loss(params, xb, yb)
        block.flat[offset] = orig - eps
        loss_minus = batch_loss(params, xb, yb)
        block.flat[offset] = orig
        numeric = (loss_plus - loss_minus) / (2 * eps)
        analytic = grads[key].flat[offset]
        denom = max(abs(numeric) + abs(analytic), 1e-8)
        max_rel = max(max_rel, abs(numeric - analytic) / denom)
    return max_rel


def save_model(model: PredictorModel) -> bytes:
    """Versioned text container: JSON with shapes and base64-encoded
    little-endian float64 parameter blocks."""
    blocks = {}
    for key, arr in model.params.blocks().items():
        data = arr.astype("<f8").tobytes()
        blocks[key] = {
            "shape": list(arr.shape),
            "data": base64.b64encode(data).decode("ascii"),
        }
    doc = {
        "format": "stratincon-model",
        "format_version": CHECKPOINT_VERSION,
        "hidden_size": model.params.hidden_size,
        "temperature": model.temperature,
        "stats": model.stats.to_json(),
        "config": {
            "epochs": model.config.epochs,
            "batch_size": model.config.batch_size,
            "learning_rate": model.config.learning_rate,
            "seed": model.config.seed,
        },
        "params": blocks,
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")


def load_model(data: bytes) -> PredictorModel:
    doc = json.loads(data.decode("utf-8"))
    if doc.get("format") != "stratincon-model" or doc.get("format_version") != CHECKPOINT_VERSION:
        raise ValueError("not a recognized model checkpoint")
    blocks = {}
    for key, spec in doc["params"].items():
        arr = np.frombuffer(base64.b64decode(spec["data"]), dtype="<f8")
        blocks[key] = arr.reshape(spec["shape"]).astype(np.float64)
    cfg = doc["config"]
    return PredictorModel(
        params=LstmParams(**blocks),
        stats=NormalizationStats.from_json(doc["stats"]),
        config=TrainConfig(
            epochs=int(cfg["epochs"]),
            batch_size=int(cfg["batch_size"]),
            learning_rate=float(cfg["learning_rate"]),
            seed=int(cfg["seed"]),
        ),
        temperature=float(doc["temperature"]),
    )


def model_fingerprint(model: PredictorModel) -> str:
    """Stable content hash identifying a trained model's parameters."""
    return hashlib.sha256(save_model(model)).hexdigest()[:16]
