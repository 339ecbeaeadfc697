"""Pure-numpy Strang stepping kernel (reference implementation).

One step is exp(−iT·dt/2ħ)·exp(−iV·dt/ħ)·exp(−iT·dt/2ħ); consecutive
kinetic half steps are merged, so the hot loop costs two transforms per step
(three when the absorbed functional is requested, which needs the closed
position-space state).

Per-step outputs refer to the closed state ψ_m at t = m·dt:

* survival[m]  = ‖ψ_m‖²·dx  (evaluated on the mid state; kinetic halves are
  unitary so the value is identical),
* absorbed[m]  = Σ_j w_j |ψ_m(x_j)|²·dx for the given weights,
* probe[m]     = Σ_l p_l · FFT(ψ_m)_l, a linear functional against the raw
  forward FFT (band-limited point evaluation, derivatives, ...).
"""

from __future__ import annotations

import numpy as np

__all__ = ["strang_evolve"]


def strang_evolve(psi0, ekh, decay, dx, n_steps, stride=0, absorb_w=None, probe_k=None):
    n = int(n_steps)
    N = len(psi0)
    want_absorb = absorb_w is not None
    want_probe = probe_k is not None

    survival = np.empty(n + 1)
    absorbed = np.empty(n + 1) if want_absorb else None
    probe = np.empty(n + 1, complex) if want_probe else None
    state_steps = [0]
    states = [np.array(psi0, dtype=complex)]

    survival[0] = np.sum(np.abs(psi0) ** 2).real * dx
    ft0 = np.fft.fft(psi0)
    if want_absorb:
        absorbed[0] = np.sum(absorb_w * np.abs(psi0) ** 2).real * dx
    if want_probe:
        probe[0] = np.sum(probe_k * ft0)

    if n == 0:
        return _pack(survival, absorbed, probe, state_steps, states, np.array(psi0, complex))

    ekf = ekh * ekh
    c = np.fft.ifft(ft0 * ekh)
    final = None
    for m in range(1, n + 1):
        c *= decay
        survival[m] = np.sum(np.abs(c) ** 2).real * dx
        ft = np.fft.fft(c)
        sample = stride > 0 and m % stride == 0 and m < n
        if want_absorb or want_probe or sample or m == n:
            z = ft * ekh
            if want_probe:
                probe[m] = np.sum(probe_k * z)
            if want_absorb or sample or m == n:
                pos = np.fft.ifft(z)
                if want_absorb:
                    absorbed[m] = np.sum(absorb_w * np.abs(pos) ** 2).real * dx
                if sample:
                    state_steps.append(m)
                    states.append(pos.copy())
                if m == n:
                    final = pos
        if m < n:
            c = np.fft.ifft(ft * ekf)
    return _pack(survival, absorbed, probe, state_steps, states, final)


def _pack(survival, absorbed, probe, state_steps, states, final):
    return {
        "survival": survival,
        "absorbed": absorbed,
        "probe": probe,
        "state_steps": np.asarray(state_steps, dtype=np.int64),
        "states": np.asarray(states, dtype=complex),
        "final": np.asarray(final, dtype=complex),
    }
