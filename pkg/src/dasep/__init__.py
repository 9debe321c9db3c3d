"""Exact stationary analysis of three related interacting-particle chains.

The package builds three finite Markov chains — a multispecies exclusion
chain on a ring, its colored Boolean shadow on (word, shape) pairs, and a
restricted growth chain on shapes — with transition rates that are exact
polynomials in two parameters u and t.  It solves for unnormalized
stationary vectors over ZZ[u,t], verifies the lumping relations between the
three chains, and mechanically checks the closed forms, recurrences, ratio
identities, matching expansions, integer specializations and orbit-average
statements that tie them together.  A Monte Carlo simulator provides an
independent approximate cross-check.
"""

from .algebra import ONE, T, U, ZERO, BivarPoly, content_gcd, parse_poly
from .chains import (
    TransitionSystem,
    build_cbp,
    build_dasep,
    build_rrg,
    check_irreducible,
    check_stochastic,
    cyclic_orbits,
    export_dot,
    matrix_json,
)
from .combinatorics import (
    CbpState,
    Partition,
    block_count,
    canonical_rotation,
    count_arrangements,
    decompose,
    enumerate_chi,
    enumerate_gamma,
    enumerate_words,
    parse_word,
    word_str,
)
from .errors import (
    AllZerosOrAllOnes,
    DasepError,
    DegreeCapExceeded,
    FixtureMissing,
    IndexMismatch,
    InvalidParams,
    KernelDimensionNotOne,
    NotDivisible,
    NotStochastic,
    ParseError,
    StateCapExceeded,
)
from .lumping import LumpingMap, cbp_to_rrg, dasep_to_cbp, push_distribution, verify_lumping
from .montecarlo import EmpiricalDistribution, SimConfig, simulate, tv_distance
from .stationary import (
    StationaryVector,
    check_cyclic_invariance,
    solve_stationary_at_point,
    solve_stationary_symbolic,
    verify_balance,
)
from .theorems import (
    OrbitReport,
    SequencePair,
    VerificationReport,
    closed_form_n22,
    homomesy_check,
    matchings_weight_sum,
    oeis_specialization,
    seq_ab,
    verify_cbp_closed_form,
    verify_main_theorem,
    verify_matchings,
    verify_n22,
    verify_ratio_corollary,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
