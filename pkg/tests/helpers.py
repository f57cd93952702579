"""Independent reference implementations used as test oracles.

Everything here is deliberately written the slow, obvious way (scalar
loops, pure-Python accumulation) so the fast production paths are checked
against code that shares none of their structure.
"""

import math

import numpy as np

from nowcast.nn import Model


def scalar_sigmoid(z):
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


def conv1d_reference(x, kernel, bias, padding="valid"):
    """Brute-force triple-loop 1D convolution for one sample.

    x: (L, C_in), kernel: (k, C_in, C_out), bias: (C_out,).
    Accumulates bias first, then taps in kernel-position-major /
    input-channel-minor order, matching the documented production order.
    """
    L, ci = x.shape
    k, _, co = kernel.shape
    if padding == "same":
        left = (k - 1) // 2
        xp = np.zeros((L + k - 1, ci))
        xp[left:left + L] = x
        lo = L
    else:
        xp = x
        lo = L - k + 1
    y = np.empty((lo, co))
    for t in range(lo):
        for oc in range(co):
            acc = bias[oc]
            for j in range(k):
                for ic in range(ci):
                    acc += xp[t + j, ic] * kernel[j, ic, oc]
            y[t, oc] = acc
    return y


def lstm_reference(x, wx, wh, b, h0=None, c0=None):
    """Scalar step-by-step LSTM for one sample: x (T, d) -> hidden (T, H).

    Gate blocks (i, f, g, o) in the fused axis, one shared bias vector.
    """
    T, d = x.shape
    H = wh.shape[0]
    h = list(h0) if h0 is not None else [0.0] * H
    c = list(c0) if c0 is not None else [0.0] * H
    out = np.empty((T, H))
    for t in range(T):
        z = [0.0] * (4 * H)
        for kk in range(4 * H):
            acc = b[kk]
            for j in range(d):
                acc += x[t, j] * wx[j, kk]
            for j in range(H):
                acc += h[j] * wh[j, kk]
            z[kk] = acc
        gi = [scalar_sigmoid(z[kk]) for kk in range(H)]
        gf = [scalar_sigmoid(z[H + kk]) for kk in range(H)]
        gg = [math.tanh(z[2 * H + kk]) for kk in range(H)]
        go = [scalar_sigmoid(z[3 * H + kk]) for kk in range(H)]
        c = [gf[kk] * c[kk] + gi[kk] * gg[kk] for kk in range(H)]
        h = [go[kk] * math.tanh(c[kk]) for kk in range(H)]
        out[t] = h
    return out


def adam_reference(theta, grads_sequence, lr=0.001, b1=0.9, b2=0.999, eps=1e-8):
    """Scalar adaptive-moment trace: apply a sequence of gradients to one
    parameter and return the value after each step."""
    m = v = 0.0
    values = []
    for t, g in enumerate(grads_sequence, start=1):
        m = b1 * m + (1 - b1) * g
        v = b2 * v + (1 - b2) * g * g
        m_hat = m / (1 - b1 ** t)
        v_hat = v / (1 - b2 ** t)
        theta = theta - lr * m_hat / (math.sqrt(v_hat) + eps)
        values.append(theta)
    return values


def make_model(input_shape, layers, name="test", mode="canonical"):
    return Model(name, mode, input_shape, layers)


def random_batch(rng, n, width):
    x = rng.standard_normal((n, width))
    y = rng.integers(0, 2, n).astype(float)
    return x, y


def count_windows_brute_force(segment_length, lookback, horizon):
    """Enumerate every valid anchor index for one segment."""
    count = 0
    for t in range(segment_length):
        if t - lookback + 1 >= 0 and t + horizon <= segment_length - 1:
            count += 1
    return count
