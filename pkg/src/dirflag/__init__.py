"""Directed flag complexes, path homology, digraph homotopy and persistence."""

from .digraph import (Digraph, DigraphMapClass, MorphismClass, VertexMap,
                      WeightedDigraph, box_product, classify_digraph_map,
                      cross_product, edge_subdivide, is_oriented,
                      reciprocal_pairs, shortest_path_quasimetric,
                      unit_interval, weak_components)
from .complexes import (OrderedSimplicialComplex, PathComplex,
                        allowed_path_complex, classify_path_morphism,
                        classify_simplicial_morphism, cylinder,
                        directed_flag_complex, mapping_cylinder, osc,
                        path_complex, regularise, skeleton,
                        simplicial_closure_of_cylinder)
from .chains import (Chain, ChainComplexRep, MultiStepWitness, OneStepWitness,
                     betti_numbers, chain_homotopy_from_witness,
                     induced_chain_map, lifting_map, omega_complex,
                     regular_boundary)
from .homotopy import (SYS_A, SYS_DFL, EquivalenceCertificate, SystemKind,
                       check_a_deformation_retraction,
                       check_dfl_deformation_retraction, dfl_relative,
                       greedy_contract, multi_step_search, one_step_A,
                       one_step_dFl, one_step_dFl_oracle,
                       one_step_dfl_relative, verify_certificate)
from .persistence import (Bar, Barcode, Filtration, GroundedBarcode,
                          InterleavingCertificate, bottleneck_distance,
                          check_delta_shifting, check_grounded_codistortion,
                          entrance_time_linf, grounded_persistent_h1,
                          persistent_dfl_homology, shortest_path_filtration,
                          verify_interleaving_certificate)
from .linalg import GF2, QQ, PrimeField, Rationals, parse_field

__version__ = "0.1.0"
