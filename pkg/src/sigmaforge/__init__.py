"""sigmaforge: sigma-quasinormality and transitivity checks over finite permutation groups."""
from .errors import DomainError, ParseError, ScaleError, SigmaError, SigmaForgeError
from .groups import (PermGroup, QuotientGroup, Subgroup, center, chief_factors_below, core, derived_subgroup,
                     frattini, generate, induces_power_automorphism, is_normal, is_perfect, is_soluble,
                     minimal_normal_subgroups, normal_closure, normal_subgroups, quotient, residual)
from .lattice import (SubgroupLattice, build_lattice, interval, is_modular_element, is_modular_lattice,
                      is_submodular, maximal_subgroups, to_dot)
from .perm import Permutation
from .report import PropertyReport
from .sigma import (SigmaPartition, SigmaQuasinormalDB, hall_subgroups, is_quasinormal, is_sigma_nilpotent,
                    is_sigma_primary, is_sigma_quasinormal, is_sigma_seminormal, is_sigma_subnormal,
                    is_subnormal, parse_sigma_spec, sigma_nilpotent_residual, sigma_of, sigma_quasinormal_db)
from .structure import (PGroupShape, PStarShape, RobinsonComplex, check_theorem_C, check_theorem_E,
                        check_theorem_F, detect_p_group, detect_p_star_group, find_robinson_complex,
                        is_QsigmaT_bruteforce, maximal_qn_dichotomy, satisfies_M_pq, satisfies_Np,
                        satisfies_Pp, satisfies_Q_sigma_pq, satisfies_Q_sigmaP, verify_theorem_B)

__version__ = "0.1.0"
