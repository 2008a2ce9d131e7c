import json

import pytest

import sorlayout


def test_single_pin():
    s = sorlayout.ConstraintSystem(1)
    assert s.add_constraint([(0, 1.0)], "eq", 5.0, 1) == 0
    r = sorlayout.solve(s, omega=1.0)
    assert r["converged"]
    assert r["iterations"] <= 2
    assert r["values"][0] == 5.0


def test_conflict_keeps_higher_priority():
    s = sorlayout.ConstraintSystem(1)
    s.add_constraint([(0, 1.0)], "eq", 1.0, 1)
    s.add_constraint([(0, 1.0)], "eq", 2.0, 2)
    r = sorlayout.solve_with_insertion(s)
    assert r["enabled"] == [0]
    assert r["disabled"] == [1]
    assert r["values"][0] == pytest.approx(1.0, rel=0.01)


def test_errors_map_to_solver_error():
    s = sorlayout.ConstraintSystem(1)
    with pytest.raises(sorlayout.SolverError):
        s.add_constraint([(0, 0.0)], "eq", 5.0, 1)
    with pytest.raises(sorlayout.SolverError):
        s.add_constraint([(0, 1.0)], "lt", 5.0, 1)
    with pytest.raises(ValueError):
        s.update_rhs(3, 1.0)


def test_system_json_round_trip():
    s = sorlayout.ConstraintSystem(2)
    s.add_constraint([(1, 1.0), (0, -1.0)], "ge", 117.0, 7)
    again = sorlayout.ConstraintSystem.from_json(s.to_json())
    assert json.loads(again.to_json()) == json.loads(s.to_json())
    assert len(again) == 1 and again.variable_count == 2


def test_layout_solve_and_resize():
    layout = sorlayout.generate_layout(10, 800, 600, seed=3)
    assert len(layout.system) == 44
    r = sorlayout.solve_with_insertion(layout.system)
    assert r["disabled"] == []
    layout.resize(300, 200)
    warm = sorlayout.solve_with_insertion(layout.system, start=r["values"])
    rects = layout.area_rects(warm["values"])
    assert len(rects) == 10
    for left, top, right, bottom in rects:
        assert -1 <= left <= right <= 302
        assert -1 <= top <= bottom <= 202
    with pytest.raises(sorlayout.SolverError):
        layout.resize(5, 200)
    assert len(layout.perturb(0.1, seed=1)) == 4


def test_fit_cubic():
    c = [1.0, 2.0, 3.0, 4.0, 5.0]
    beta, r2 = sorlayout.fit_cubic(c, [2 + 3 * x for x in c])
    assert beta[0] == pytest.approx(2.0)
    assert beta[1] == pytest.approx(3.0)
    assert r2 == pytest.approx(1.0)


def test_bench_main(tmp_path):
    out = tmp_path / "records.csv"
    code, _, _ = sorlayout.bench_main(
        ["--use-case", "small", "--max-areas", "5", "--layouts", "1", "--changes", "2",
         "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("use_case,strategy,n_constraints")
    assert len(lines) == 1 + 2 * 2 * 2
    code, _, _ = sorlayout.bench_main(["--nope"])
    assert code != 0


def test_service_protocol():
    service = sorlayout.Service(token_seed=5)
    loaded = service.handle({"type": "load", "n_areas": 1, "width": 800, "height": 600})
    assert loaded["type"] == "loaded"
    area = loaded["areas"][0]
    assert area["right"] == pytest.approx(800, rel=0.01)
    sid = loaded["session_id"]
    r = service.handle({"type": "resize", "session": sid, "width": 800, "height": 600})
    assert r["stats"]["sweeps"] <= 1
    err = service.handle({"type": "resize", "session": "missing", "width": 1, "height": 1})
    assert err == {"type": "error", "code": "UnknownSession", "message": err["message"]}
    assert service.session_count == 1
