import numpy as np

from brake_index.paths import CoefficientPath
from brake_index.suites import IDENTITIES, check_case, run_suite, suite_cases


def test_cases_deterministic():
    a = suite_cases(3, 4)
    b = suite_cases(3, 4)
    assert all(np.array_equal(x.B.values, y.B.values) for x, y in zip(a, b))


def test_case_dimensions():
    assert {c.n for c in suite_cases(0, 12, n_max=3)} <= {1, 2, 3}


def test_check_case_all_identities():
    base = suite_cases(9, 1)[0]
    psd = suite_cases(10, 1, psd=True)[0]
    out = check_case(base, psd)
    assert set(out.checks) == set(IDENTITIES)
    assert all(ok for ok, _ in out.checks.values())


def test_report_table_and_roundtrip():
    rep = run_suite(2, 1, n_max=1, families=("signature-bare", "double-iterate"))
    assert rep.ok and "signature-bare" in rep.table()
    case = suite_cases(2, 1, n_max=1)[0]
    d = case.B.to_dict()
    again = CoefficientPath(np.array(d["grid"]), np.array(d["B"]), d["periodic"])
    assert np.array_equal(again.values, case.B.values)
