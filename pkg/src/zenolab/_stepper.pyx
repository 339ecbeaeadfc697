# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled Strang stepping kernel (FFTW backend).

Same contract as ``zenolab._stepper_py.strang_evolve``; the whole stepping
loop runs in C with FFTW plans created once per call, no per-step Python
dispatch and no temporaries.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef extern from "fftw3.h" nogil:
    ctypedef double fftw_complex[2]
    ctypedef struct fftw_plan_s
    ctypedef fftw_plan_s *fftw_plan
    void *fftw_malloc(size_t n)
    void fftw_free(void *p)
    fftw_plan fftw_plan_dft_1d(int n, fftw_complex *inp, fftw_complex *out,
                               int sign, unsigned flags)
    void fftw_execute(fftw_plan p)
    void fftw_destroy_plan(fftw_plan p)

cdef int FFTW_FORWARD = -1
cdef int FFTW_BACKWARD = 1
cdef unsigned FFTW_ESTIMATE = 1u << 6


def strang_evolve(psi0, ekh, decay, double dx, n_steps, stride=0,
                  absorb_w=None, probe_k=None):
    cdef Py_ssize_t n = int(n_steps)
    cdef Py_ssize_t N = len(psi0)
    cdef Py_ssize_t srd = int(stride)
    cdef bint want_absorb = absorb_w is not None
    cdef bint want_probe = probe_k is not None

    psi0 = np.ascontiguousarray(psi0, dtype=np.complex128)
    cdef const double complex[::1] psi0_v = psi0
    cdef const double complex[::1] ekh_v = np.ascontiguousarray(ekh, dtype=np.complex128)
    cdef const double[::1] decay_v = np.ascontiguousarray(decay, dtype=np.float64)
    cdef const double complex[::1] probe_v
    cdef const double[::1] absw_v
    if want_probe:
        probe_v = np.ascontiguousarray(probe_k, dtype=np.complex128)
    else:
        probe_v = np.empty(1, dtype=np.complex128)
    if want_absorb:
        absw_v = np.ascontiguousarray(absorb_w, dtype=np.float64)
    else:
        absw_v = np.empty(1, dtype=np.float64)

    survival = np.empty(n + 1, dtype=np.float64)
    absorbed = np.empty(n + 1, dtype=np.float64) if want_absorb else None
    probe = np.empty(n + 1, dtype=np.complex128) if want_probe else None
    cdef Py_ssize_t n_samples = 1 + ((n - 1) // srd if (srd > 0 and n > 0) else 0)
    states = np.empty((n_samples, N), dtype=np.complex128)
    state_steps = np.empty(n_samples, dtype=np.int64)
    final = np.empty(N, dtype=np.complex128)

    cdef double[::1] sur_v = survival
    cdef double[::1] abs_v = absorbed if want_absorb else np.empty(1)
    cdef double complex[::1] prb_v = probe if want_probe else np.empty(1, dtype=np.complex128)
    cdef double complex[:, ::1] states_v = states
    cdef cnp.int64_t[::1] steps_v = state_steps
    cdef double complex[::1] final_v = final

    # step 0 bookkeeping; states row 0 is the initial state
    states_v[0, :] = psi0_v
    steps_v[0] = 0
    cdef double acc = 0.0, acc2 = 0.0
    cdef Py_ssize_t j, m, row
    for j in range(N):
        acc += (psi0_v[j].real * psi0_v[j].real + psi0_v[j].imag * psi0_v[j].imag)
        if want_absorb:
            acc2 += absw_v[j] * (psi0_v[j].real * psi0_v[j].real + psi0_v[j].imag * psi0_v[j].imag)
    sur_v[0] = acc * dx
    if want_absorb:
        abs_v[0] = acc2 * dx

    cdef double complex *bufx = <double complex *> fftw_malloc(N * sizeof(double complex))
    cdef double complex *bufk = <double complex *> fftw_malloc(N * sizeof(double complex))
    cdef double complex *bufk2 = <double complex *> fftw_malloc(N * sizeof(double complex))
    cdef double complex *bufx2 = <double complex *> fftw_malloc(N * sizeof(double complex))
    if bufx == NULL or bufk == NULL or bufk2 == NULL or bufx2 == NULL:
        fftw_free(bufx); fftw_free(bufk); fftw_free(bufk2); fftw_free(bufx2)
        raise MemoryError("fftw_malloc failed")

    cdef fftw_plan fwd = fftw_plan_dft_1d(<int> N, <fftw_complex *> bufx,
                                          <fftw_complex *> bufk, FFTW_FORWARD, FFTW_ESTIMATE)
    cdef fftw_plan bwd_close = fftw_plan_dft_1d(<int> N, <fftw_complex *> bufk2,
                                                <fftw_complex *> bufx2, FFTW_BACKWARD, FFTW_ESTIMATE)
    cdef fftw_plan bwd_cont = fftw_plan_dft_1d(<int> N, <fftw_complex *> bufk,
                                               <fftw_complex *> bufx, FFTW_BACKWARD, FFTW_ESTIMATE)

    cdef double invN = 1.0 / N
    cdef double complex z, pacc
    cdef bint need_closed, sample
    try:
        with nogil:
            for j in range(N):
                bufx[j] = psi0_v[j]
            fftw_execute(fwd)  # raw FFT of psi0
            if want_probe:
                pacc = 0
                for j in range(N):
                    pacc += probe_v[j] * bufk[j]
                prb_v[0] = pacc
            if n == 0:
                for j in range(N):
                    bufx2[j] = psi0_v[j]
            else:
                # first kinetic half step
                for j in range(N):
                    bufk[j] = bufk[j] * ekh_v[j] * invN
                fftw_execute(bwd_cont)  # bufx = mid state c_0
            row = 1
            for m in range(1, n + 1):
                acc = 0.0
                for j in range(N):
                    bufx[j] = bufx[j] * decay_v[j]
                    acc += bufx[j].real * bufx[j].real + bufx[j].imag * bufx[j].imag
                sur_v[m] = acc * dx
                fftw_execute(fwd)  # bufk = raw FFT of mid state
                sample = srd > 0 and m % srd == 0 and m < n
                need_closed = want_absorb or sample or m == n
                if want_probe or need_closed:
                    pacc = 0
                    if want_probe:
                        for j in range(N):
                            z = bufk[j] * ekh_v[j]
                            bufk2[j] = z * invN
                            pacc += probe_v[j] * z
                        prb_v[m] = pacc
                    else:
                        for j in range(N):
                            bufk2[j] = bufk[j] * ekh_v[j] * invN
                    if need_closed:
                        fftw_execute(bwd_close)  # bufx2 = closed state psi_m
                        if want_absorb:
                            acc2 = 0.0
                            for j in range(N):
                                acc2 += absw_v[j] * (bufx2[j].real * bufx2[j].real
                                                     + bufx2[j].imag * bufx2[j].imag)
                            abs_v[m] = acc2 * dx
                        if sample:
                            for j in range(N):
                                states_v[row, j] = bufx2[j]
                            steps_v[row] = m
                            row += 1
                if m < n:
                    for j in range(N):
                        bufk[j] = bufk[j] * ekh_v[j] * ekh_v[j] * invN
                    fftw_execute(bwd_cont)  # bufx = next mid state
            for j in range(N):
                final_v[j] = bufx2[j]
    finally:
        fftw_destroy_plan(fwd)
        fftw_destroy_plan(bwd_close)
        fftw_destroy_plan(bwd_cont)
        fftw_free(bufx); fftw_free(bufk); fftw_free(bufk2); fftw_free(bufx2)

    return {
        "survival": survival,
        "absorbed": absorbed,
        "probe": probe,
        "state_steps": state_steps,
        "states": states,
        "final": final,
    }
