import numpy as np
import pytest

from crowdmatch.model import MuProfile, TaskInstance, TaskType


@pytest.fixture
def simple_type():
    return TaskType(
        id=0, mean_result_size=50.0, complexity=200.0, deadline=130.0,
        earning=151.4, count_per_round=1,
    )


@pytest.fixture
def simple_mu():
    return MuProfile(
        id=0,
        cpu_freq_mean=1e9,
        power_comm=0.2,
        power_comp=1.0,
        cost_time=0.01,
        cost_energy=0.004,
        mean_sense_time=np.array([100.0]),
        mean_comm_time=np.array([0.05]),
    )


@pytest.fixture
def simple_task():
    return TaskInstance(task_id=0, type_id=0, result_size=50.0, round=1)
