"""Correlation detection between induced subgraphs of a large graph.

Given two vertex-windows observed from (possibly) the same underlying
population graph, the package evaluates test statistics for deciding whether
the windows are correlated or independent: a polynomial-time statistic built
from weighted injective homomorphism counts of small motif families, and an
exhaustive information-theoretic benchmark over partial vertex matchings.
Supporting labs cover the motif enumeration itself, low-degree hardness
diagnostics, overlap and core-set constructions, and a config-driven
experiment harness with ROC/AUC summaries.
"""

from .errors import CapacityError, DegenerateParameterError, ParameterError
from .graphs import (CenteredGraph, Injection, ModelParams, Permutation,
                     SimpleGraph, VertexSample, center, induced_subgraph,
                     overlap_size, parse_edge_list, read_edge_list,
                     sample_correlated_pair, sample_er,
                     sample_induced_subgraph, write_edge_list)
from .harness import (ExperimentConfig, RocCurve, TrialRecord,
                      ingest_edge_list, read_scores_csv, roc_auc,
                      run_experiment, run_real, run_synthetic,
                      write_scores_csv)
from .homcount import (MultiMotif, PartitionTerm, hom_weighted,
                       inj_bruteforce, inj_weighted, partition_terms,
                       quotient)
from .lowdegree import (SnrReport, SnrTerm, low_degree_snr,
                        snr_closed_form_bound)
from .motifs import (Motif, MotifFamily, canonical_form,
                     enumerate_bounded_degree, enumerate_free_trees,
                     enumerate_simple_no_isolated, enumerate_structured_bd,
                     is_isomorphic, parse_family_spec,
                     structured_size_lower_bound)
from .rng import derive_rng, derive_seed
from .stats import (AdmissibilityReport, TestOutcome, WeightedFamily,
                    admissibility_report, decide, default_m,
                    expected_signal, intersection_graph,
                    it_statistic_exhaustive, it_statistic_greedy,
                    it_threshold, motif_statistic, run_test,
                    threshold_tau_poly, weight_omega)
from .theory import (CoreSet, DigraphDecomposition, binomial_lower_tail_bound,
                     binomial_upper_tail_bound,
                     binomial_upper_tail_bound_ratio, core_set,
                     decompose_functional_digraph,
                     hypergeometric_lower_tail_bound,
                     hypergeometric_upper_tail_bound, overlap_pmf,
                     tail_bounds)

__version__ = "0.1.0"
