import numpy as np
import pytest

from twlab import rk
from twlab.errors import StepFailure


def test_exponential_decay_accuracy():
    sol = rk.solve_rk(lambda t, y: [-y[0]], 0.0, 2.0, [1.0], h_out=0.01)
    table = sol.hermite()
    for t in (0.5, 1.0, 1.7):
        assert abs(table(t, component=0) - np.exp(-t)) < 1e-13


def test_backward_direction_and_nodes():
    sol = rk.solve_rk(lambda t, y: [y[0]], 3.0, -1.0, [1.0], h_out=0.5)
    assert sol.t[0] == 3.0 and sol.t[-1] == -1.0
    assert len(sol.t) == 9
    assert abs(sol.y[0, -1] - np.exp(-4.0)) < 1e-13


def test_rescaling_ledger():
    # y' = y grows past the threshold; ratios survive, ledger records scale
    sol = rk.solve_rk(
        lambda t, y: [y[0], y[1]],
        0.0,
        12.0,
        [1.0, 2.0],
        h_out=0.5,
        rescale_threshold=100.0,
        rescale_channels=slice(0, 2),
    )
    assert sol.scale_log[-1] > 0
    # ratio is scale-invariant
    assert abs(sol.y[1, -1] / sol.y[0, -1] - 2.0) < 1e-12
    # ledger restores the true magnitude
    assert abs(np.log(sol.y[0, -1]) + sol.scale_log[-1] - 12.0) < 1e-10


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_step_failure_on_singular_rhs():
    with pytest.raises(StepFailure):
        rk.solve_rk(
            lambda t, y: [y[0] / (t - 0.5)], 0.0, 1.0, [1.0], h_out=0.1,
            max_steps=10000,
        )


def test_hermite_table_component_and_vector():
    sol = rk.solve_rk(lambda t, y: [-y[0], y[1]], 0.0, 1.0, [1.0, 1.0], h_out=0.1)
    table = sol.hermite()
    both = table(0.55)
    assert abs(both[0] - table(0.55, component=0)) < 1e-16
    arr = table(np.array([0.1, 0.9]), component=1)
    assert arr.shape == (2,)
