import json
import math

import pytest

import hamflow


def test_case_study_pipeline(fixture_costs, data_dir):
    instance = hamflow.case_study(fixture_costs)
    assert hamflow.validate(instance) == []
    assert instance.horizon == 6
    assert instance.capacity == 100
    assert len(instance.arcs) == 8

    full = hamflow.expand(instance, prune=False)
    assert full.num_flows == 96
    assert full.num_vehicles == 48
    model = hamflow.expand(instance)
    assert model.num_variables < full.num_variables

    reference = hamflow.reconstruct(model, (data_dir / "reference_schedule.json").read_text())
    check = hamflow.verify(model, reference)
    assert check["feasible"]
    assert all(r == 0 for r in check["residuals"])

    result = hamflow.solve_exact(model)
    assert result["status"] == "optimal"
    best = result["best"]
    assert best["objective"] < check["objective"]
    assert best["energy"] == best["objective"]


def test_hamiltonian_roundtrip(fixture_costs):
    model = hamflow.expand(hamflow.case_study(fixture_costs))
    h = hamflow.compile_hamiltonian(model)
    assert h.num_decisions == model.num_variables
    assert h.total_levels == sum(h.levels)
    text = h.export()
    assert text.startswith("HAMILTONIAN v1 vars=%d" % (h.num_decisions + h.num_slacks))
    assert h.dynamic_range_db() > 0

    optimum = hamflow.solve_exact(model)["best"]
    point = h.encode(model, optimum["values"])
    assert math.isclose(h.energy(point), optimum["objective"], rel_tol=1e-9)
    assert h.decode(model, point) == optimum["values"]


def test_annealer_is_deterministic(data_dir):
    instance = hamflow.load_instance(str(data_dir / "micro.json"))
    model = hamflow.expand(instance)
    h = hamflow.compile_hamiltonian(model)
    first = hamflow.anneal(h, model, seed=3, restarts=6, sweeps=300)
    second = hamflow.anneal(h, model, seed=3, restarts=6, sweeps=300, threads=3)
    strip = lambda samples: [{k: v for k, v in s.items() if k != "wall_time"} for s in samples]
    assert strip(first) == strip(second)
    assert first[0]["feasible"]
    assert first[0]["objective"] == 5.0


def test_report_tables(fixture_costs, data_dir):
    model = hamflow.expand(hamflow.case_study(fixture_costs))
    reference = hamflow.reconstruct(model, (data_dir / "reference_schedule.json").read_text())
    tables = hamflow.report_tables(model, reference)
    assert tables["cargo"].splitlines()[1] == "N1->N2,120,180,0,0,0,0"
    as_json = json.loads(hamflow.report_tables(model, reference, "json")["inventory"])
    assert as_json["rows"]


def test_errors_are_typed(data_dir):
    with pytest.raises(hamflow.ParseError):
        hamflow.parse_instance("{")
    with pytest.raises(hamflow.ValidationError):
        hamflow.parse_instance(
            json.dumps(
                {
                    "depots": [{"id": "A", "label": ""}],
                    "arcs": [{"from": "A", "to": "N9", "cost": 1, "travel_time": 1}],
                    "commodities": [{"id": "C", "load": 10}],
                    "horizon": 2,
                    "capacity": 100,
                    "schedule": [],
                }
            )
        )
    model = hamflow.expand(hamflow.load_instance(str(data_dir / "micro.json")))
    with pytest.raises(hamflow.ValidationError):
        hamflow.verify(model, [0])
    assert issubclass(hamflow.ValidationError, hamflow.Error)
