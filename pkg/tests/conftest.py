import numpy as np
import pytest
from skimage import data


def _gray(name):
    return getattr(data, name)().astype(float) / 255.0


@pytest.fixture(scope="session")
def camera():
    return _gray("camera")


@pytest.fixture(scope="session")
def camera_small(camera):
    # 128x128 block average keeps tests fast but still textured
    return camera.reshape(128, 4, 128, 4).mean(axis=(1, 3))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


VERDICTS = []


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in VERDICTS:
            terminalreporter.write_line(line)
