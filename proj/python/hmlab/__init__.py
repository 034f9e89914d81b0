"""Sphere-valued harmonic map laboratory.

Thin python layer over the C++ core: icosphere and ball-grid meshes, W^{1,p}
norms and topological degree of sphere maps, degree-preserving dipole
perturbations, controlled homotopies with their norm estimate, and
Dirichlet-energy minimization with singularity detection.
"""

from ._hmlab import (
    BallMap,
    BallMesh,
    SphereMap,
    TriangulatedSphere,
    bubble_insert,
    build_ball_grid,
    build_icosphere,
    degree,
    dirichlet_energy,
    find_singularities,
    homotopy_estimate,
    make_map,
    minimize,
    radial_extension,
    w1p_distance,
    w1p_norm,
)

__all__ = [
    "BallMap",
    "BallMesh",
    "SphereMap",
    "TriangulatedSphere",
    "bubble_insert",
    "build_ball_grid",
    "build_icosphere",
    "degree",
    "dirichlet_energy",
    "find_singularities",
    "homotopy_estimate",
    "make_map",
    "minimize",
    "radial_extension",
    "w1p_distance",
    "w1p_norm",
]
