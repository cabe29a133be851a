"""Exact-arithmetic toolkit for finite-dimensional algebras.

Submodules:
  exactla — exact linear algebra over ℚ and GF(p)
  algebra — structure-constant algebras (radical, corners, Cartan matrices)
  quiver  — bound quiver constructions and the two named families
  modrep  — modules, morphisms, duality, Nakayama functors, decomposition
  homalg  — resolutions, Ext, minimal approximations
  domdim  — dominant dimensions, tilting, hearts, gradients, subrings
  cli     — command-line front end
"""

from __future__ import annotations

__version__ = "0.1.0"
