# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled weighted power-spectrogram kernel (FFTW backend).

One real-to-complex FFT plan is reused for every (frame, taper) pair;
windowing and the weighted power accumulation run without the GIL. Input
validation lives in ``mtmel.backend``, which is the only intended caller.
"""

import numpy as np


cdef extern from "fftw3.h" nogil:
    ctypedef double fftw_complex[2]
    ctypedef struct fftw_plan_s:
        pass
    ctypedef fftw_plan_s *fftw_plan
    double *fftw_alloc_real(size_t n)
    fftw_complex *fftw_alloc_complex(size_t n)
    void fftw_free(void *p)
    fftw_plan fftw_plan_dft_r2c_1d(int n, double *inp, fftw_complex *out,
                                   unsigned flags)
    void fftw_execute(const fftw_plan p)
    void fftw_destroy_plan(fftw_plan p)
    unsigned FFTW_ESTIMATE


def weighted_power(const double[::1] x, const double[:, ::1] tapers,
                   const double[::1] weights, Py_ssize_t hop,
                   Py_ssize_t n_frames):
    """Accumulate ``sum_k weights[k] * |rfft(frame * tapers[k])|**2``."""
    cdef Py_ssize_t k_count = tapers.shape[0]
    cdef Py_ssize_t n = tapers.shape[1]
    cdef Py_ssize_t n_freq = n // 2 + 1
    cdef Py_ssize_t t, k, i, f, base
    cdef double lam, re, im

    out = np.zeros((n_freq, n_frames))
    cdef double[:, ::1] acc = out

    cdef double *buf = fftw_alloc_real(n)
    cdef fftw_complex *spec = fftw_alloc_complex(n_freq)
    if buf == NULL or spec == NULL:
        if buf != NULL:
            fftw_free(buf)
        if spec != NULL:
            fftw_free(spec)
        raise MemoryError("fftw buffer allocation failed")
    # Plan creation is not reentrant; it runs here under the GIL.
    cdef fftw_plan plan = fftw_plan_dft_r2c_1d(<int> n, buf, spec,
                                               FFTW_ESTIMATE)
    if plan == NULL:
        fftw_free(buf)
        fftw_free(spec)
        raise RuntimeError("fftw planning failed")

    try:
        with nogil:
            for t in range(n_frames):
                base = t * hop
                for k in range(k_count):
                    lam = weights[k]
                    for i in range(n):
                        buf[i] = x[base + i] * tapers[k, i]
                    fftw_execute(plan)
                    for f in range(n_freq):
                        re = spec[f][0]
                        im = spec[f][1]
                        acc[f, t] += lam * (re * re + im * im)
    finally:
        fftw_destroy_plan(plan)
        fftw_free(buf)
        fftw_free(spec)
    return out
