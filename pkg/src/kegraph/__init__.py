"""KE graphs, Deming decompositions and Egervary graphs."""

from .deming import DemingDecomposition, deming_decomposition, induced_perfect_matching
from .egervary import EgervaryVerdict, is_egervary, necessary_conditions
from .graph import Graph, parse_graph6, parse_graphs
from .harness import AnalysisRecord, Budgets, analyze, run_conjecture_suite
from .independence import alpha, independence_number, maximum_critical_independent_set
from .ke import KECertificate, is_ke, ke_certificate, validate_certificate
from .matching import Matching, maximum_matching, perfect_matching
from .subdivision import EvenSubdivision, recognize_even_subdivision

__all__ = [
    "AnalysisRecord",
    "Budgets",
    "DemingDecomposition",
    "EgervaryVerdict",
    "EvenSubdivision",
    "Graph",
    "KECertificate",
    "Matching",
    "alpha",
    "analyze",
    "deming_decomposition",
    "independence_number",
    "induced_perfect_matching",
    "is_egervary",
    "is_ke",
    "ke_certificate",
    "maximum_critical_independent_set",
    "maximum_matching",
    "necessary_conditions",
    "parse_graph6",
    "parse_graphs",
    "perfect_matching",
    "recognize_even_subdivision",
    "run_conjecture_suite",
    "validate_certificate",
]
