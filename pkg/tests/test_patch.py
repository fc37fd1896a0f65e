#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""坐标片：圆盘丛与平坦圆丛上的逐点检验"""

import numpy as np
import pytest

from hosts.builtins import (
    builtin_disc_bundle, builtin_flat_disco, disc_eta_einstein, disc_psi_eigenvalue,
)
from structures.acm import derived_operators, patch_structure, validate
from structures.classification import classify
from structures.einstein import eta_einstein_fit, eta_einstein_over_samples
from structures.rank import rank_over_samples
from utils.errors import DomainError, PreconditionError

C = -4.0


def nonzero_clusters(s):
    spectrum = derived_operators(s).spectrum
    return [(v, m) for v, m in spectrum.clusters if abs(v) > 1e-8]


def test_samples_are_deterministic_and_inside(disc_patch):
    first = disc_patch.sample_points(5, seed=3)
    second = disc_patch.sample_points(5, seed=3)
    assert len(first) == 5
    for a, b in zip(first, second):
        assert np.array_equal(a, b)
    assert all(disc_patch.contains(x) for x in first)


def test_point_outside_domain(disc_patch):
    with pytest.raises(DomainError):
        disc_patch.at([1.0, 0.0, 0.0, 0.0, 0.0])
    with pytest.raises(DomainError):
        disc_patch.at([0.0, 0.0, 0.0])


@pytest.mark.parametrize('c', [0.0, 2.5])
def test_disc_needs_negative_curvature(c):
    with pytest.raises(PreconditionError):
        builtin_disc_bundle(c)


def test_disc_structure_is_anti_quasi_sasakian(disc_patch, disc_points):
    s = patch_structure(disc_patch, disc_points[0])
    assert validate(s).passed
    report = classify(s)
    assert report.flag('anti_quasi_sasakian')
    assert not report.flag('normal')


def test_disc_psi_eigenvalue(disc_patch, disc_points):
    for x in disc_points[:3]:
        clusters = nonzero_clusters(patch_structure(disc_patch, x))
        assert len(clusters) == 1
        value, mult = clusters[0]
        assert mult == 4
        assert value == pytest.approx(disc_psi_eigenvalue(C, x), rel=1e-6)


@pytest.mark.parametrize('c', [-1.0, -4.0, -8.0])
def test_disc_closed_forms_on_32_points(c):
    patch = builtin_disc_bundle(c)
    points = patch.sample_points(32, seed=0)
    assert len(points) == 32
    for x in points:
        s = patch_structure(patch, x)
        report = classify(s, with_rank=False)
        for flag in ('anti_quasi_sasakian', 'anti_normal', 'd_phi_zero', 'xi_killing'):
            assert report.flag(flag), (flag, x)
        clusters = nonzero_clusters(s)
        assert [m for _, m in clusters] == [4]
        assert clusters[0][0] == pytest.approx(disc_psi_eigenvalue(c, x), rel=1e-6)
        mu, nu = disc_eta_einstein(c, x)
        fit = eta_einstein_fit(s)
        assert fit.mu == pytest.approx(mu, rel=1e-6)
        assert fit.nu == pytest.approx(nu, rel=1e-6)


def test_disc_centre_eigenvalue_for_c_minus_8():
    # z = 0: λ² = 64/64
    s = patch_structure(builtin_disc_bundle(-8.0), np.zeros(5))
    (value, mult), = nonzero_clusters(s)
    assert mult == 4
    assert value == pytest.approx(-1.0, rel=1e-8)


def test_disc_eta_einstein_at_centre(disc_patch):
    # z = 0: λ² = c²/64 = 1/4
    x = np.zeros(5)
    assert disc_psi_eigenvalue(C, x) == pytest.approx(-0.25)
    fit = eta_einstein_fit(patch_structure(disc_patch, x))
    assert fit.is_eta_einstein
    assert fit.mu == pytest.approx(-6.5, rel=1e-6)
    assert fit.nu == pytest.approx(7.5, rel=1e-6)


def test_disc_eta_einstein_varies(disc_patch, disc_points):
    report = eta_einstein_over_samples(disc_patch, disc_points)
    assert report.pointwise
    assert not report.constant
    for x, fit in zip(disc_points, report.fits):
        mu, nu = disc_eta_einstein(C, x)
        assert fit.mu == pytest.approx(mu, rel=1e-6)
        assert fit.nu == pytest.approx(nu, rel=1e-6)


def test_disc_rank_is_constant(disc_patch, disc_points):
    report = rank_over_samples(disc_patch, disc_points)
    assert report.sampled and report.points == len(disc_points)
    assert report.rank_eta == 5
    assert (report.p, report.q) == (1, 0)
    assert report.to_dict()['sampled'] is True


def test_flat_disco_reeb_ricci(flat_patch):
    x = flat_patch.sample_points(1, seed=1)[0]
    s = patch_structure(flat_patch, x)
    ric = s.curvature.ric.components
    assert ric[4, 4] == pytest.approx(1.0, abs=1e-8)
    clusters = nonzero_clusters(s)
    assert clusters[0][0] == pytest.approx(-0.25, rel=1e-8)


def test_flat_disco_constant_eta_einstein(flat_patch):
    report = eta_einstein_over_samples(flat_patch, flat_patch.sample_points(4, seed=0))
    assert report.pointwise and report.constant
    assert report.fits[0].mu == pytest.approx(-0.5, abs=1e-8)
    assert report.fits[0].nu == pytest.approx(1.5, abs=1e-8)


def test_untwisted_bundle_is_cokahler():
    patch = builtin_disc_bundle(C, twisted=False)
    s = patch_structure(patch, np.array([0.1, -0.2, 0.3, 0.0, 1.0]))
    report = classify(s)
    assert report.flag('cokahler')
    assert report.flag('d_eta_zero')


def test_flat_disco_parameters():
    with pytest.raises(PreconditionError):
        builtin_flat_disco(0)
    with pytest.raises(PreconditionError):
        builtin_flat_disco(1, 2)
    with pytest.raises(PreconditionError):
        builtin_flat_disco(1, 0)
    patch = builtin_flat_disco(2, 1)
    assert patch.dim == 9
    assert patch.describe()['params']['p'] == 1
