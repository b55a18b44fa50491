import sys

import pytest

from fenopt.encoding import Encoder, Scenario
from fenopt.errors import EvaluatorTimeout, ProtocolError, SpawnError
from fenopt.sim.external import external_evaluate

ECHO_STUB = [sys.executable, "-c", (
    "import json,sys;"
    "req=json.loads(sys.stdin.readline());"
    "assert req['schema_version']==1 and 'design' in req and 'building' in req;"
    "print(json.dumps({'edh': 21.5, 'edc': 9.25, 'nct': 120, 'q_sol_jul': 1.2}))"
)]

NEGATIVE_STUB = [sys.executable, "-c", (
    "import json,sys;sys.stdin.readline();"
    "print(json.dumps({'edh': -1.0, 'edc': 9.0, 'nct': 120, 'q_sol_jul': 1.2}))"
)]

GARBAGE_STUB = [sys.executable, "-c",
                "import sys;sys.stdin.readline();print('not json')"]

SLEEP_STUB = [sys.executable, "-c", "import time;time.sleep(30)"]


@pytest.fixture()
def design(building, catalog):
    enc = Encoder(building, catalog, Scenario.S1)
    return enc.canonicalize(enc.lower.copy())


def test_echo_stub_round_trip(design, building):
    result = external_evaluate(design, building, "weather.epw", ECHO_STUB)
    assert result.edh == 21.5
    assert result.edc == 9.25
    assert result.nct == 120
    assert result.q_sol_jul == 1.2


def test_negative_metric_rejected(design, building):
    with pytest.raises(ProtocolError):
        external_evaluate(design, building, "weather.epw", NEGATIVE_STUB)


def test_garbage_response_rejected(design, building):
    with pytest.raises(ProtocolError):
        external_evaluate(design, building, "weather.epw", GARBAGE_STUB)


def test_dead_command(design, building):
    with pytest.raises(SpawnError):
        external_evaluate(design, building, "weather.epw",
                          ["/nonexistent/evaluator-binary"])


def test_timeout(design, building):
    with pytest.raises(EvaluatorTimeout):
        external_evaluate(design, building, "weather.epw", SLEEP_STUB,
                          timeout_s=0.5)
