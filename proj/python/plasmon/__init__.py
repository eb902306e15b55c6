"""Quasinormal-mode plasmonics of spheres, dimers and chains."""

from ._core import (  # noqa: F401
    DrudeMaterial,
    SphereMode,
    chain_eigenvalues,
    dimer,
    eps_in,
    kappa,
    oracle_resonances,
    sigma,
    single_sphere_modes,
    sph_bessel_j,
    sph_hankel2,
    transmission,
    transmission_both,
)
