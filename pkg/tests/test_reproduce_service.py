import pytest

from menulab.errors import ReproductionFailure
from menulab.services import reproduce_service
from menulab.services.reproduce_service import ReproduceService, ReproductionTarget, reproduce


@pytest.mark.parametrize('target', [
    ReproductionTarget.W_CONSTANT,
    ReproductionTarget.XOS_NONMONOTONE,
    ReproductionTarget.EXAMPLE_5,
    ReproductionTarget.EXAMPLE_6,
])
def test_fast_targets_pass(target):
    checks = reproduce(target)
    assert checks
    assert all(check.passed for check in checks)
    assert {check.target for check in checks} == {target}


@pytest.mark.parametrize('target', [
    ReproductionTarget.THEOREM_3_1,
    ReproductionTarget.THEOREM_4_1,
    ReproductionTarget.LEMMA_5,
])
def test_property_targets_on_fewer_instances(target):
    service = ReproduceService(instances=40)
    service.run(target)
    assert service.ok


@pytest.mark.slow
@pytest.mark.parametrize('target', [ReproductionTarget.EXAMPLE_4, ReproductionTarget.EXAMPLE_7,
                                    ReproductionTarget.ER_GAP])
def test_slow_targets_pass(target):
    assert all(check.passed for check in reproduce(target, workers=4))


def test_check_lines():
    line = reproduce(ReproductionTarget.W_CONSTANT)[0].line()
    assert line.startswith('PASS w-constant: root of (w-1)e^w = 1: 1.2784')
    assert line.endswith('(expected in (1.2784, 1.2785)) [derived]')


def test_failed_check_raises(monkeypatch):
    monkeypatch.setitem(reproduce_service.EXPECTED, 'w.low', (1.3, 'published'))
    with pytest.raises(ReproductionFailure, match="root of"):
        reproduce(ReproductionTarget.W_CONSTANT)


def test_unknown_target():
    with pytest.raises(ValueError):
        reproduce('example-8')
