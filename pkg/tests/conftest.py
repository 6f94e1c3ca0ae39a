import json

import pytest

from psent.app.core.analysis.equation import EquationSpec
from psent.app.core.continuation.types import ContinuationSettings


@pytest.fixture
def cubic():
    """ y'' = 2 y^3, solved by y = 1/(z - z*) and y = -1/(z - z*). """
    return EquationSpec.canonical(3, [[0], [0]])


@pytest.fixture
def painleve1():
    """ y'' = 6 y^2 + z. """
    return EquationSpec.canonical(2, [[0, 1]])


@pytest.fixture
def tight():
    return ContinuationSettings.from_settings(rel_tol=1e-11, abs_tol=1e-11, threads=1)


@pytest.fixture
def equation_file(tmp_path):
    """ Write an equation file and return its path. """
    def write(N, coeffs, name="equation.json"):
        path = tmp_path / name
        path.write_text(json.dumps({"N": N, "coeffs": coeffs}), encoding="utf-8")
        return path
    return write
