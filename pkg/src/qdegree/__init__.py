"""qdegree: exact desk-scale analysis of Boolean functions and the
query-counted quantum subroutines that evaluate addressing schemes.

Submodules:

* ``boolfn`` — truth tables, Fourier spectra, influences, sensitivity;
* ``approxdeg`` — minimax approximation by exact-rational LP, approximate degree;
* ``tails`` — hypercontractive moment/tail bound verification;
* ``qsim`` — statevector simulation with query counting (phase oracles,
  Bernstein-Vazirani, Grover mismatch search);
* ``discrimination`` — nearly-orthogonal state discrimination POVMs built
  from Gram matrices;
* ``addressing`` — two quantum addressing schemes and their composition
  into total Boolean functions;
* ``cli`` — the ``qdegree`` command-line reproduction harness.

``qdegree.kernels.BACKEND`` names the active kernel implementation
("cython" or "python").
"""

from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
