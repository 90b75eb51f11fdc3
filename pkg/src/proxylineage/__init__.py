"""Proxy-anchored smart-contract lineage mining and analysis.

Pipeline stages: load delegatecall traces and contract metadata into a
canonical corpus; classify each proxy's callees into chronologically ordered
lineages; pair versions at contract, file and function granularity; estimate
contract similarity with MinHash/LSH fingerprints and score similarity-based
lineage construction against the rule-based ground truth; and track
vulnerability-warning lifecycles across version pairs.
"""

from ._version import __version__
from .corpus import (
    ContractRecord,
    Corpus,
    DEFAULT_UPGRADE_SIGNATURES,
    SourceFile,
    TraceEvent,
    compute_selector,
    load_corpus,
    monitored_selectors,
    upgrade_proxies,
    write_corpus,
)
from .dataset import (
    DatasetBundle,
    StatsReport,
    build_bundle,
    compute_stats,
    emit_dataset,
    load_bundle,
)
from .errors import (
    ConfigurationError,
    FetchError,
    IntegrityError,
    NotFingerprintableError,
    ParseError,
    UnknownAddressError,
    ValidationError,
)
from .evaluation import ContractScope, LineageEvaluator, ScenarioResult
from .explorer import ExplorerClient, RateLimiter, fetch_contract, fetch_contracts
from .fingerprint import (
    Fingerprint,
    LshIndex,
    SimilarityCategory,
    SimilarityVerdict,
    compare,
    fingerprint,
    minhash_signature,
    query_similar,
)
from .keccak import keccak_256
from .lifecycle import (
    Finding,
    FindingKey,
    LifecycleRecord,
    LifecycleStatus,
    diff_pair,
    lifecycle_stats,
    load_findings,
)
from .lineage import (
    ActivityWindow,
    ContractPair,
    ExclusionReason,
    Lineage,
    LineageDiagnostics,
    activity_windows,
    build_lineages,
    contract_pairs,
)
from .pairing import (
    FilePair,
    FilePairing,
    FunctionPair,
    FunctionPairing,
    MatchKind,
    line_similarity,
    pair_files,
    pair_functions,
)
from .solidity import FunctionUnit, extract_functions, tokenize
from .textmetrics import lcs_length, levenshtein

__all__ = [
    "__version__",
    "ActivityWindow",
    "ConfigurationError",
    "ContractPair",
    "ContractRecord",
    "ContractScope",
    "Corpus",
    "DatasetBundle",
    "DEFAULT_UPGRADE_SIGNATURES",
    "ExclusionReason",
    "ExplorerClient",
    "FetchError",
    "FilePair",
    "FilePairing",
    "Finding",
    "FindingKey",
    "Fingerprint",
    "FunctionPair",
    "FunctionPairing",
    "FunctionUnit",
    "IntegrityError",
    "Lineage",
    "LineageDiagnostics",
    "LineageEvaluator",
    "LifecycleRecord",
    "LifecycleStatus",
    "LshIndex",
    "MatchKind",
    "NotFingerprintableError",
    "ParseError",
    "RateLimiter",
    "ScenarioResult",
    "SimilarityCategory",
    "SimilarityVerdict",
    "SourceFile",
    "StatsReport",
    "TraceEvent",
    "UnknownAddressError",
    "ValidationError",
    "activity_windows",
    "build_bundle",
    "build_lineages",
    "compare",
    "compute_selector",
    "compute_stats",
    "contract_pairs",
    "diff_pair",
    "emit_dataset",
    "extract_functions",
    "fetch_contract",
    "fetch_contracts",
    "fingerprint",
    "keccak_256",
    "lcs_length",
    "levenshtein",
    "lifecycle_stats",
    "line_similarity",
    "load_bundle",
    "load_corpus",
    "load_findings",
    "minhash_signature",
    "monitored_selectors",
    "pair_files",
    "pair_functions",
    "query_similar",
    "tokenize",
    "upgrade_proxies",
    "write_corpus",
]
