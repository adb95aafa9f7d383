"""percsim: samplers and verification oracles for planar percolation models.

Subpackages are deliberately flat modules:

- ``lattice``         geometry (boxes, faces, crosses, diamond domains)
- ``percolation``     Bernoulli edge configurations and cluster labelings
- ``cluster_tree``    finitary cluster-tree queries with witness radii
- ``gradient_coding`` spin sources and gradient reconstruction
- ``random_cluster``  FK / Potts sampling (exact via monotone CFTP)
- ``superimposed``    three-state cross configurations on two sublattices
- ``sixvertex``       height functions, arrows, spins and their couplings
- ``oracle``          exact rational enumeration for small windows
- ``cli``             percsim command-line entry point
"""

__version__ = "0.1.0"

from . import lattice, seeding  # noqa: F401
