"""Shared fixtures for the test suite."""

import numpy as np
import pytest

from mtmel import AudioBuffer, write_wav
from mtmel.testkit import synthetic_chirp


@pytest.fixture(scope="session")
def chirp_buffer() -> AudioBuffer:
    return AudioBuffer(samples=synthetic_chirp(), sample_rate=16000)


@pytest.fixture(scope="session")
def chirp_wav(tmp_path_factory, chirp_buffer):
    path = tmp_path_factory.mktemp("audio") / "chirp.wav"
    write_wav(chirp_buffer, path)
    return path


@pytest.fixture(params=["compiled", "pure"])
def each_backend(request):
    """Run the decorated test once per available kernel backend."""
    from mtmel import backend

    name = request.param
    if name not in backend.available_backends():
        pytest.skip(f"{name} backend not built")
    backend.set_backend(name)
    yield name
    backend.set_backend(None)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(12345))
