"""Smoke tests for the _diraclab extension module."""

import math
import tempfile

import _diraclab as dl


def approx(a, b, tol=1e-9):
    assert abs(a - b) <= tol, f"{a} != {b} (tol {tol})"


def test_model():
    p = dl.ModelParams(1, 1)
    assert p.p == 1 and p.sigma == 0.5
    approx(dl.eval_w(p, 1 + 0j, 1 + 0j), 4.0)
    f, g = dl.eval_fg(p, 1 + 0j, 1 + 0j)
    approx(f, 2.0)
    approx(g, 2.0)


def test_planar():
    approx(dl.tau_of_y(0.6), 0.75)
    approx(dl.y_of_tau(0.75), 0.6)
    approx(dl.energy(1.0, 0.0), 1.0)
    approx(dl.sigma_escape_time(1.0), 0.25)
    approx(dl.blowup_location(1.0), -1.0 / math.sqrt(17.0), 1e-12)

    traj = dl.integrate_planar(1.0, -1.0, tau_max=10.0)
    assert traj.termination == "reached_endpoint"
    for t, s in zip(traj.t, traj.state):
        exact = dl.sigma_flow(1.0, -1, t)
        approx(s[0], exact, 1e-8 * exact)


def test_polar_and_fit():
    p = dl.ModelParams(1, 1)
    traj = dl.integrate_polar(p, 1.0, 1.0, -math.pi / 2, direction=1)
    assert traj.termination == "reached_endpoint"
    samples = []
    for i in range(32):
        y = 1.0 - 10.0 ** (-2 - 4 * i / 31)
        amp_u, amp_v, _ = dl.bounded_profile(1.0, y)
        samples.append((y, amp_u))
    slope, _, r2 = dl.fit_power_law(samples, 0.99, 0.999999)
    assert 0.24 <= slope <= 0.26 and r2 > 0.999


def test_pde():
    p = dl.ModelParams(1, 1)
    n, dx = 385, 1.0 / 64
    xs = [-3.0 + dx * i for i in range(n)]
    u1 = [complex(math.exp(-2 * x * x)) for x in xs]
    u2 = [0.5 * complex(math.exp(-2 * x * x)) for x in xs]
    field = dl.make_field(-3.0, dx, u1, u2)
    q0 = dl.charge(field)
    for _ in range(10):
        assert dl.step(field, p)
    approx(dl.charge(field), q0, 1e-8 * q0)

    seeded = dl.seed_self_similar(
        p,
        lambda y: complex(dl.bounded_profile(1.0, y)[0]),
        lambda y: complex(0.0, -dl.bounded_profile(1.0, y)[1]),
        0.0, -0.2, 1.0 / 256, 283,
    )
    err = dl.compare_with_ansatz(
        seeded, p,
        lambda y: complex(dl.bounded_profile(1.0, y)[0]),
        lambda y: complex(0.0, -dl.bounded_profile(1.0, y)[1]),
    )
    assert err <= 1e-12


def test_run_experiment():
    with tempfile.TemporaryDirectory() as out:
        result = dl.run_experiment("subcommand=verify-closed-form\n", out)
        assert result["pass"]
        assert "closed_form.csv" in result["files"]


def main():
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"{name}: ok")


if __name__ == "__main__":
    main()
