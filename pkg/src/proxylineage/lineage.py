"""Proxy-anchored lineage construction from delegatecall activity.

A lineage is the ordered list of implementation versions served through one
proxy. Classification applies four rules: every member must have been a
delegatecall callee of the lineage's proxy; a lineage needs at least two
versions; all members share one creator; and activity windows must be
strictly chronological with no overlap. Callees that fall out of the
classification are never dropped silently: each one lands in the diagnostics
with a reason code, so members plus exclusions always account for every
(proxy, callee) observation.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .corpus import Corpus

SECONDS_PER_DAY = 86400.0


@dataclass(frozen=True)
class ActivityWindow:
    """First and last observed delegatecall times for one (proxy, callee)."""

    first_call: int
    last_call: int


@dataclass(frozen=True)
class LineageVersion:
    address: str
    window: ActivityWindow


@dataclass(frozen=True)
class Lineage:
    proxy: str
    creator: str
    versions: tuple[LineageVersion, ...]


@dataclass(frozen=True)
class ContractPair:
    """Adjacent predecessor/successor versions within one lineage."""

    proxy: str
    predecessor: str
    successor: str
    gap_days: float
    predecessor_window: ActivityWindow
    successor_window: ActivityWindow


class ExclusionReason(str, Enum):
    NOT_SAME_CREATOR = "NOT_SAME_CREATOR"
    OVERLAPPING_WINDOW = "OVERLAPPING_WINDOW"
    SINGLETON = "SINGLETON"
    UNRESOLVED_METADATA = "UNRESOLVED_METADATA"


@dataclass(frozen=True)
class ExcludedCallee:
    proxy: str
    callee: str
    reason: ExclusionReason


@dataclass
class LineageDiagnostics:
    """Audit trail: every excluded (proxy, callee) with its reason."""

    exclusions: list[ExcludedCallee]

    def by_proxy(self) -> dict[str, list[ExcludedCallee]]:
        grouped: dict[str, list[ExcludedCallee]] = {}
        for exclusion in self.exclusions:
            grouped.setdefault(exclusion.proxy, []).append(exclusion)
        return grouped


def activity_windows(corpus: Corpus) -> dict[tuple[str, str], ActivityWindow]:
    """Min/max delegatecall timestamp per (proxy, callee) observation."""
    bounds: dict[tuple[str, str], tuple[int, int]] = {}
    for event in corpus.events:
        key = (event.proxy_address, event.callee_address)
        if key in bounds:
            first, last = bounds[key]
            bounds[key] = (min(first, event.timestamp), max(last, event.timestamp))
        else:
            bounds[key] = (event.timestamp, event.timestamp)
    return {key: ActivityWindow(first, last) for key, (first, last) in bounds.items()}


def build_lineages(corpus: Corpus) -> tuple[list[Lineage], LineageDiagnostics]:
    """Classify every proxy's callees into a lineage or a diagnosed exclusion.

    Per proxy: callees without contract metadata are excluded as
    UNRESOLVED_METADATA; the rest are partitioned by creator and the largest
    group wins (ties: earliest first activity, then lexicographic creator),
    losing groups excluded as NOT_SAME_CREATOR. The winning group is sorted
    by first activity (ties by address) and greedily chained, keeping a
    version only when its first call is strictly after the last kept
    version's last call; dropped versions are OVERLAPPING_WINDOW. A chain
    shorter than two versions yields no lineage and its survivors are
    SINGLETON. Output is sorted by proxy address and independent of input
    event order.
    """
    windows = activity_windows(corpus)
    callees_by_proxy: dict[str, set[str]] = {}
    for proxy, callee in windows:
        callees_by_proxy.setdefault(proxy, set()).add(callee)

    lineages: list[Lineage] = []
    exclusions: list[ExcludedCallee] = []

    for proxy in sorted(callees_by_proxy):
        groups: dict[str, list[str]] = {}
        for callee in sorted(callees_by_proxy[proxy]):
            record = corpus.contracts.get(callee)
            if record is None:
                exclusions.append(ExcludedCallee(proxy, callee, ExclusionReason.UNRESOLVED_METADATA))
            else:
                groups.setdefault(record.creator, []).append(callee)
        if not groups:
            continue

        def group_rank(creator: str) -> tuple[int, int, str]:
            members = groups[creator]
            earliest = min(windows[(proxy, c)].first_call for c in members)
            return (-len(members), earliest, creator)

        winner = min(groups, key=group_rank)
        for creator in groups:
            if creator == winner:
                continue
            for callee in groups[creator]:
                exclusions.append(ExcludedCallee(proxy, callee, ExclusionReason.NOT_SAME_CREATOR))

        ordered = sorted(groups[winner], key=lambda c: (windows[(proxy, c)].first_call, c))
        kept: list[LineageVersion] = []
        for callee in ordered:
            window = windows[(proxy, callee)]
            if kept and window.first_call <= kept[-1].window.last_call:
                exclusions.append(ExcludedCallee(proxy, callee, ExclusionReason.OVERLAPPING_WINDOW))
                continue
            kept.append(LineageVersion(address=callee, window=window))

        if len(kept) >= 2:
            lineages.append(Lineage(proxy=proxy, creator=winner, versions=tuple(kept)))
        else:
            for version in kept:
                exclusions.append(ExcludedCallee(proxy, version.address, ExclusionReason.SINGLETON))

    exclusions.sort(key=lambda e: (e.proxy, e.callee))
    return lineages, LineageDiagnostics(exclusions=exclusions)


def contract_pairs(lineages: list[Lineage]) -> list[ContractPair]:
    """Adjacent version pairs; a lineage of length n yields exactly n-1 pairs."""
    pairs: list[ContractPair] = []
    for lineage in lineages:
        for earlier, later in zip(lineage.versions, lineage.versions[1:]):
            pairs.append(
                ContractPair(
                    proxy=lineage.proxy,
                    predecessor=earlier.address,
                    successor=later.address,
                    gap_days=(later.window.first_call - earlier.window.last_call) / SECONDS_PER_DAY,
                    predecessor_window=earlier.window,
                    successor_window=later.window,
                )
            )
    return pairs
