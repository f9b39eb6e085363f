"""Christensen-Ivan systems over AF chains
==========================================

Two constructions: a commutative binary chain (built in point coordinates)
and the noncommutative chain C in M_2 through the dense GNS route.  Both
produce Dirac operators assembled from conditional-projection increments.

To run:
    python demos/02_christensen_ivan.py
"""

import numpy as np

from spectral_limits import (
    AfChain,
    FiniteCStarAlgebra,
    StarHomomorphism,
    State,
    binary_branching,
    ci_system,
    commutative_af_chain,
    eigh,
    gns,
    realize,
    system_validate,
)


def main():
    # Binary chain C -> C^2 -> ... -> C^16 with uniform state.
    alphas = [1.0, 2.0, 3.0, 4.0]
    chain = commutative_af_chain(binary_branching(4), np.full(16, 1 / 16), alphas)
    system = ci_system(chain, 4)
    print("binary chain dims:", [t.hilbert_dim for t in system.triples])
    dec = eigh(system.triples[4].dirac)
    print("spec(D_4):", np.round(dec.eigenvalues, 6))
    print("  (alpha_i on each projection increment, 0 on the base line)")
    print("validation:", system_validate(system).summary())

    r = realize(system)
    print("projection ranks:", [int(round(np.trace(r.projection(j)).real)) for j in range(5)])

    # Noncommutative chain: scalars inside M_2 with the normalized trace.
    c1, m2 = FiniteCStarAlgebra((1,)), FiniteCStarAlgebra((2,))
    inc = StarHomomorphism(c1, m2, matrix=np.array([[1], [0], [0], [1]], dtype=complex))
    tau = State(m2, (np.eye(2, dtype=complex) / 2,))
    nc_chain = AfChain((c1, m2), (inc,), tau, (5.0,))
    nc_system = ci_system(nc_chain, 1)
    print("\nC in M_2, alpha = 5:")
    print("spec(D_1):", np.round(eigh(nc_system.triples[1].dirac).eigenvalues, 9))

    # The GNS inner product on matrix units under the trace state.
    space = gns(m2, tau)
    print("GNS gram on matrix units (= I/2):")
    print(np.round(space.gram.real, 3))


if __name__ == "__main__":
    main()
