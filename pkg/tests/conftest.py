import importlib

import numpy as np
import pytest

from clonefeedback import _purepy

SEED = 42


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


def _kernel_modules():
    mods = [pytest.param(_purepy, id="python")]
    try:
        mods.append(pytest.param(importlib.import_module("clonefeedback._kernels"), id="compiled"))
    except ImportError:
        mods.append(pytest.param(None, id="compiled", marks=pytest.mark.skip("extension not built")))
    return mods


@pytest.fixture(params=_kernel_modules())
def kernels(request):
    return request.param


_acceptance = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call" and not report.failed:
        return
    key = marker.args
    ok = report.passed if report.when == "call" else False
    _acceptance[key] = _acceptance.get(key, True) and ok


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for (n, title), ok in sorted(_acceptance.items()):
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}")
