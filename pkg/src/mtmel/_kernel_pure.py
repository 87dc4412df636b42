"""NumPy fallback for the weighted power-spectrogram kernel.

Same contract as the compiled kernel in ``_kernel.pyx``: inputs are assumed
validated by :mod:`mtmel.backend`.
"""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def weighted_power(x, tapers, weights, hop, n_frames):
    """Accumulate ``sum_k weights[k] * |rfft(frame * tapers[k])|**2``.

    Returns a ``(n//2 + 1, n_frames)`` float64 array for tapers of length
    ``n``. Loops over tapers (K is small) so peak memory stays at one
    complex spectrum block regardless of K.
    """
    n = tapers.shape[1]
    frames = sliding_window_view(x, n)[::hop][:n_frames]
    out = np.zeros((n // 2 + 1, n_frames))
    for taper, weight in zip(tapers, weights):
        spec = np.fft.rfft(frames * taper, axis=1)
        out += weight * (spec.real ** 2 + spec.imag ** 2).T
    return out
