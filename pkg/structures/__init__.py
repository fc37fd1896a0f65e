#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
几乎切触度量结构包
结构本身、分类、恒等式、Ricci 检验、变形、Sp(n) 三元组与典范联络
"""

from .acm import AcmStructure, validate, nijenhuis, derived_operators, standard_structure, patch_structure
from .rank import RankReport, rank_of_eta, rank_over_samples
from .classification import ClassificationReport, classify, cg_membership, gqs_and_transverse_checks
from .identities import (
    aqs_structure_equation, sasakian_structure_equation, closed_triplet_check, identity_suite,
)
from .einstein import eta_einstein_fit, eta_einstein_over_samples, constant_curvature_check, xi_sectional_curvatures
from .deformations import homothetic_deform, KahlerFactor, product_with_kahler
from .quaternionic import (
    SpnTriple, build_weighted_heisenberg, quaternionic_check, double_aqs_check,
    structure_equations_check, lemma_cmd_check, hypo_su2_check, k1_promote,
)
from .canonical import (
    CanonicalConnection, canonical_connection, parallel_torsion_test, decomposition_check,
    local_symmetry_check, nonnegative_curvature_check, uniqueness_check,
)

__all__ = [
    'AcmStructure', 'validate', 'nijenhuis', 'derived_operators', 'standard_structure', 'patch_structure',
    'RankReport', 'rank_of_eta', 'rank_over_samples',
    'ClassificationReport', 'classify', 'cg_membership', 'gqs_and_transverse_checks',
    'aqs_structure_equation', 'sasakian_structure_equation', 'closed_triplet_check', 'identity_suite',
    'eta_einstein_fit', 'eta_einstein_over_samples', 'constant_curvature_check', 'xi_sectional_curvatures',
    'homothetic_deform', 'KahlerFactor', 'product_with_kahler',
    'SpnTriple', 'build_weighted_heisenberg', 'quaternionic_check', 'double_aqs_check',
    'structure_equations_check', 'lemma_cmd_check', 'hypo_su2_check', 'k1_promote',
    'CanonicalConnection', 'canonical_connection', 'parallel_torsion_test', 'decomposition_check',
    'local_symmetry_check', 'nonnegative_curvature_check', 'uniqueness_check',
]
