import pytest

from catenoid import full_report, make_spec
from catenoid.errors import NonConvergenceError



class TestFullReport:
    def test_unit_waist_n3_all_pass(self, spec3):
        rep = full_report(spec3, seed=1)
        failures = [s for s in rep.suites if not s.passed]
        assert rep.overall_passed, \
            [(s.name, s.max_residual, s.tolerance) for s in failures]
        names = [s.name for s in rep.suites]
        assert names[0] == "profile_invariants"
        assert "morse_index" in names and "decay_functional" in names
        assert all(s.wall_time >= 0.0 for s in rep.suites)

    @pytest.mark.slow
    def test_scaled_waist_n5_all_pass(self):
        spec = make_spec(5, 2.0)
        rep = full_report(spec, seed=1)
        assert rep.overall_passed, \
            [(s.name, s.max_residual, s.tolerance)
             for s in rep.suites if not s.passed]

    def test_threads_match_serial(self, spec3):
        serial = full_report(spec3, seed=3)
        threaded = full_report(spec3, seed=3, threads=4)
        for a, b in zip(serial.suites, threaded.suites):
            assert a.name == b.name
            assert a.passed == b.passed
            assert a.max_residual == b.max_residual

    @pytest.mark.slow
    def test_unreachable_tolerance_marks_non_convergence(self, spec3):
        rep = full_report(spec3, tol=1e-30, seed=1)
        stuck = {s.name: s for s in rep.suites}["morse_index"]
        assert stuck.non_convergence and not stuck.passed
        assert not rep.overall_passed
