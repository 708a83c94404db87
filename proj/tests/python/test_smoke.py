import math
import pathlib

import pytest

import shadowsec as ss

CONFIGS = pathlib.Path(__file__).resolve().parents[2] / "configs"


def symmetric():
    net = ss.NetworkConfig()
    net.relays = net.receivers = net.eavesdroppers = 1
    net.antennas_rx = net.antennas_eve = 2
    net.hop_sp = ss.FadingParams(1.0, 1.0, 2.0, 2.0)
    net.hop_pq = ss.FadingParams(2.0, 1.0, ss.INF, 1.0)
    net.hop_pw = ss.FadingParams(2.0, 1.0, ss.INF, 1.0)
    return net


def fig6():
    net = ss.NetworkConfig()
    hop = ss.FadingParams(1.0, 1.0, ss.INF)
    net.hop_sp = ss.FadingParams(1.0, 1.0, ss.INF, ss.db_to_linear(5.0))
    net.hop_pq = ss.FadingParams(1.0, 1.0, ss.INF, ss.db_to_linear(5.0))
    net.hop_pw = ss.FadingParams(hop.kappa, hop.mu, hop.m, 0.1)
    return net


def test_rayleigh_preset_density():
    p = ss.preset("rayleigh")
    assert (p.kappa, p.mu) == (0.0, 1.0)
    assert math.isinf(p.m)
    for x in (0.1, 1.0, 3.0):
        assert ss.hop_pdf(p, x) == pytest.approx(math.exp(-x), rel=1e-12)
        assert ss.hop_ccdf(p, x) == pytest.approx(math.exp(-x), rel=1e-10)


def test_symmetric_network_is_balanced():
    net = symmetric()
    for method in ("closed_form", "quadrature"):
        assert abs(ss.pnsmc(net, method).value - 0.5) <= 0.002
        assert abs(ss.esmc(net, method).value) <= 0.005
    mc = ss.pnsmc(net, "monte_carlo", trials=100_000, seed=3)
    assert abs(mc.value - 0.5) <= 3 * mc.tail_estimate


def test_methods_agree():
    net = fig6()
    cf = ss.sopm(net, 0.5, "closed_form")
    qd = ss.sopm(net, 0.5, "quadrature")
    assert abs(cf.value - qd.value) < 5e-4
    assert cf.metric == "sopm" and cf.method == "closed_form"
    assert ss.bestrelay_cdf(net, 1.0) < ss.bestrelay_cdf(net, 2.0)


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        ss.FadingParams(-1.0, 1.0)
    with pytest.raises(ss.ConfigError):
        ss.preset("weibull")
    net = fig6()
    net.hop_pq = ss.FadingParams(1.0, 1.25, 2.0, 1.0)
    net.antennas_rx = 1
    with pytest.raises(ss.ShapeIntegralityError):
        ss.pnsmc(net, "closed_form")
    assert 0.0 < ss.pnsmc(net, "quadrature").value < 1.0


def test_sampler_mean():
    p = ss.FadingParams(1.0, 1.0, 2.0, 2.0)
    draws = ss.sample_hop(p, 200_000, seed=11)
    mean = sum(draws) / len(draws)
    assert mean == pytest.approx(2.0, rel=0.02)
    assert draws == ss.sample_hop(p, 200_000, seed=11, threads=2)


def test_run_sweep_rows():
    rows = ss.run_sweep(str(CONFIGS / "fig7_sopm_relays.json"))
    assert len(rows) == 4 * 6 * 2
    assert all(r["error"] == "" for r in rows)
    first = [r["result"] for r in rows if r["value"] == 5.0 and r["method"] == "quadrature"]
    assert first == sorted(first, reverse=True)
