"""Elastic shape matching with position- and feature-dependent stretch
penalties, plus empirical audits of (extended) b-metric axioms."""

from .contour import (Contour, FeatureSequence, angular_difference,
                      feature_sequence, generate_shape, load_contour,
                      resample_uniform, rotate_start, save_contour,
                      tangent_profile)
from .elastic import (CostModel, DistanceReport, GroundCost, Modulus, StretchFn,
                      brute_force_nem_sigma, load_cost_model, nem, nem_r,
                      nem_sigma, nem_sigma_cyclic)
from .mapping import (Mapping, delannoy, enumerate_minimal_mappings,
                      enumerate_monotone_paths, is_minimal, mapping_cost,
                      stretch_edges, validate_mapping)
from .metric_audit import (AuditReport, audit_dissimilarity, audit_nem_r_bound,
                           check_axioms,
                           relaxation_modulus, theoretical_bound_nem_r,
                           theta_surrogate_nem_sigma, verify_relaxed_triangle)
from .retrieval import (RobotSpec, SceneSpec, build_corpus, distance_matrix,
                        knn_query, load_manifest, load_matrix, robot_scenario,
                        save_matrix)

__version__ = "0.1.0"
