"""Central automorphisms of finite p-groups: pc-presentation engine, order formulas and brute-force audits."""

__version__ = "0.1.0"
