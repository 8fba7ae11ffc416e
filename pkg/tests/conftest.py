import pytest

from pdxcorr.gf2m import build_field


@pytest.fixture(scope="session")
def f6():
    return build_field(6)


@pytest.fixture(scope="session")
def f12():
    return build_field(12)


def naive_mul(a, b, poly):
    """Schoolbook product then long division; shares no code with the package."""
    prod = 0
    for i in range(b.bit_length()):
        if (b >> i) & 1:
            prod ^= a << i
    deg = poly.bit_length() - 1
    for i in range(prod.bit_length() - 1, deg - 1, -1):
        if (prod >> i) & 1:
            prod ^= poly << (i - deg)
    return prod


def naive_pow(a, e, poly):
    r = 1
    for _ in range(e):
        r = naive_mul(r, a, poly)
    return r


def naive_sequences(m, poly):
    """s_t = tr(alpha^t) and u_t = tr_1^n(beta^t) by repeated naive products."""
    n = m // 2
    order = 2**m - 1

    def tr(x, deg):
        acc, y = 0, x
        for _ in range(deg):
            acc ^= y
            y = naive_mul(y, y, poly)
        return acc

    s, x = [], 1
    for _ in range(order):
        s.append(tr(x, m))
        x = naive_mul(x, 2, poly)
    beta = naive_pow(2, 2**n + 1, poly)
    u, y = [], 1
    for _ in range(2**n - 1):
        u.append(tr(y, n))
        y = naive_mul(y, beta, poly)
    assert set(s) <= {0, 1} and set(u) <= {0, 1}
    return s, u


def naive_spectrum(m, poly, d):
    from collections import Counter

    s, u = naive_sequences(m, poly)
    N = len(u)
    vals = [
        sum(1 - 2 * (s[t] ^ u[d * (t + tau) % N]) for t in range(len(s))) for tau in range(N)
    ]
    return vals, dict(Counter(vals))


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(id, title): exit criterion")


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            crit = getattr(rep, "acceptance", None)
            if crit and (rep.when == "call" or outcome == "error"):
                lines.append((crit[0], crit[1], "PASS" if outcome == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for cid, title, status in sorted(lines):
            terminalreporter.write_line(f"AC{cid} {status}  {title}")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("acceptance")
    if marker is not None:
        outcome.get_result().acceptance = marker.args
