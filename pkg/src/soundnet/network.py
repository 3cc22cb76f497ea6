"""Network of sounds: pitch-bin nodes, consecutive-component edges, degree
centrality, and maximum-clique detection.

Nodes are half-open semitone intervals [note m, note m+1) of the 12-tone
equal-tempered grid; an undirected simple edge joins the bins of each pair of
consecutive in-range frequency components. Same-bin pairs (self-loops) are
dropped and repeated edges collapse.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import EmptyNetwork, NonPositiveFrequency, SingleNode

PITCH_CLASS_NAMES = ("C", "C♯", "D", "D♯", "E", "F", "F♯", "G", "G♯", "A", "A♯", "B")

MIDI_LOW = 12   # C0
MIDI_HIGH = 120  # C9 (exclusive upper edge of the grid)


def note_name(midi: int) -> str:
    return f"{PITCH_CLASS_NAMES[midi % 12]}{midi // 12 - 1}"


@dataclass(frozen=True)
class PitchGrid:
    """Equal-tempered reference grid, tunable via the A4 anchor."""

    a4_hz: float = 440.0

    def __post_init__(self):
        if self.a4_hz <= 0:
            raise ValueError("a4_hz must be positive")

    def note_freq(self, midi) -> float:
        return self.a4_hz * 2.0 ** ((np.asarray(midi) - 69) / 12.0)

    @property
    def low_hz(self) -> float:
        return float(self.note_freq(MIDI_LOW))

    @property
    def high_hz(self) -> float:
        return float(self.note_freq(MIDI_HIGH))


@dataclass(frozen=True)
class PitchBin:
    """Half-open frequency interval between two adjacent notes; f belongs to
    the bin iff lower_hz <= f < upper_hz."""

    midi_lower: int
    lower_note: str
    upper_note: str
    lower_hz: float
    upper_hz: float


def grid_bin(midi: int, grid: PitchGrid | None = None) -> PitchBin:
    """The pitch bin whose lower note is the given MIDI number."""
    grid = grid or PitchGrid()
    return PitchBin(
        midi_lower=midi,
        lower_note=note_name(midi),
        upper_note=note_name(midi + 1),
        lower_hz=float(grid.note_freq(midi)),
        upper_hz=float(grid.note_freq(midi + 1)),
    )


def _midi_of(freqs: np.ndarray, grid: PitchGrid) -> np.ndarray:
    """Lower-note MIDI number of the bin containing each frequency.

    The floor of the log-ratio is nudged so the decision is anchored on the
    note frequencies themselves, keeping lower-inclusive bounds exact.
    """
    m = np.floor(69.0 + 12.0 * np.log2(freqs / grid.a4_hz)).astype(np.int64)
    m += freqs >= grid.note_freq(m + 1)
    m -= freqs < grid.note_freq(m)
    return m


def bin_of(freq_hz: float, grid: PitchGrid | None = None) -> PitchBin | None:
    """The unique pitch bin containing freq_hz, or None when outside the grid.

    Raises NonPositiveFrequency for freq_hz <= 0.
    """
    grid = grid or PitchGrid()
    if freq_hz <= 0.0:
        raise NonPositiveFrequency(f"frequency must be > 0 Hz, got {freq_hz}")
    midi = int(_midi_of(np.asarray([freq_hz], dtype=np.float64), grid)[0])
    if midi < MIDI_LOW or midi >= MIDI_HIGH:
        return None
    return grid_bin(midi, grid)


@dataclass(frozen=True)
class SoundNetwork:
    """Undirected simple graph over pitch bins."""

    grid: PitchGrid
    nodes: tuple          # PitchBin, ascending MIDI
    edges: frozenset      # frozenset of (midi_a, midi_b) with midi_a < midi_b
    degree_centrality: dict = field(default_factory=dict)  # midi -> deg/(N-1); empty when N == 1
    largest_clique: tuple = ()
    dropped_components: int = 0

    @property
    def single_node(self) -> bool:
        return len(self.nodes) == 1

    def node_by_midi(self, midi: int) -> PitchBin:
        return self._index[midi]

    @property
    def _index(self):
        return {b.midi_lower: b for b in self.nodes}

    def adjacency(self) -> dict:
        adj = {b.midi_lower: set() for b in self.nodes}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj


def build_network(seq, grid: PitchGrid | None = None) -> SoundNetwork:
    """Build the network of sounds from a frequency sequence.

    Out-of-range components are removed (and counted) before pairing, so the
    neighbors of a dropped component become adjacent in the sequence.
    Raises EmptyNetwork when nothing maps onto the grid.
    """
    grid = grid or PitchGrid()
    values = np.asarray(getattr(seq, "values_hz", seq), dtype=np.float64)
    if values.size and values.min() <= 0.0:
        raise NonPositiveFrequency("sequence contains non-positive frequencies")

    if values.size:
        midis = _midi_of(values, grid)
        in_range = (midis >= MIDI_LOW) & (midis < MIDI_HIGH)
        dropped = int(values.size - in_range.sum())
        midis = midis[in_range]
    else:
        midis = np.empty(0, dtype=np.int64)
        dropped = 0
    if midis.size == 0:
        raise EmptyNetwork("no in-range frequency components")

    node_midis = np.unique(midis)
    nodes = tuple(grid_bin(int(m), grid) for m in node_midis)

    edges = set()
    if midis.size > 1:
        a, b = midis[:-1], midis[1:]
        keep = a != b
        lo = np.minimum(a[keep], b[keep])
        hi = np.maximum(a[keep], b[keep])
        edges = {(int(x), int(y)) for x, y in zip(lo, hi)}

    centrality = {}
    n = len(nodes)
    if n >= 2:
        degree = {int(m): 0 for m in node_midis}
        for x, y in edges:
            degree[x] += 1
            degree[y] += 1
        centrality = {m: degree[m] / (n - 1) for m in degree}

    net = SoundNetwork(
        grid=grid,
        nodes=nodes,
        edges=frozenset(edges),
        degree_centrality=centrality,
        dropped_components=dropped,
    )
    return replace(net, largest_clique=largest_clique(net))


def degree_centrality(net: SoundNetwork) -> dict:
    """deg(v) / (N - 1) per node, keyed by lower-note MIDI number.

    Raises SingleNode for N == 1, where the ratio is undefined.
    """
    if len(net.nodes) < 2:
        raise SingleNode("degree centrality is undefined on a single-node network")
    return dict(net.degree_centrality)


def largest_clique(net: SoundNetwork) -> tuple:
    """Maximum clique as a tuple of PitchBins (ascending MIDI).

    Bron-Kerbosch with pivoting; among maximum cliques of equal size the
    lexicographically smallest sorted MIDI tuple wins. The result is
    re-verified as a clique before returning.
    """
    adj = net.adjacency()
    vertices = sorted(adj)
    best: list[tuple] = []

    def expand(r: list, p: set, x: set):
        if not p and not x:
            candidate = tuple(sorted(r))
            if not best or len(candidate) > len(best[0]) or (
                len(candidate) == len(best[0]) and candidate < best[0]
            ):
                best[:] = [candidate]
            return
        pivot = max(p | x, key=lambda v: (len(adj[v] & p), -v))
        for v in sorted(p - adj[pivot]):
            expand(r + [v], p & adj[v], x & adj[v])
            p.remove(v)
            x.add(v)

    expand([], set(vertices), set())
    clique = best[0] if best else ()
    for i, a in enumerate(clique):
        for b in clique[i + 1 :]:
            if b not in adj[a]:
                raise RuntimeError("internal error: clique verification failed")
    index = net._index
    return tuple(index[m] for m in clique)


# Octave buckets follow the A-note ladder: [A0-A1) starts at MIDI 21.
OCTAVE_BUCKETS = (
    "<A0",
    "[A0-A1)",
    "[A1-A2)",
    "[A2-A3)",
    "[A3-A4)",
    "[A4-A5)",
    "[A5-A6)",
    ">=A6",
)


def clique_octave_histogram(clique, grid: PitchGrid | None = None) -> dict:
    """Count clique members per A-to-A octave range of their lower note."""
    counts = {bucket: 0 for bucket in OCTAVE_BUCKETS}
    for node in clique:
        m = node.midi_lower
        if m < 21:
            counts["<A0"] += 1
        elif m >= 93:
            counts[">=A6"] += 1
        else:
            counts[OCTAVE_BUCKETS[1 + (m - 21) // 12]] += 1
    return counts


def network_to_dict(net: SoundNetwork) -> dict:
    """JSON-ready view: nodes with note names and Hz bounds, index edges,
    centrality keyed by lower-note name, clique member names."""
    order = {b.midi_lower: i for i, b in enumerate(net.nodes)}
    return {
        "a4_hz": net.grid.a4_hz,
        "nodes": [
            {
                "midi": b.midi_lower,
                "notes": [b.lower_note, b.upper_note],
                "hz": [b.lower_hz, b.upper_hz],
            }
            for b in net.nodes
        ],
        "edges": sorted([order[a], order[b]] for a, b in net.edges),
        "degree_centrality": {
            net.node_by_midi(m).lower_note: v for m, v in sorted(net.degree_centrality.items())
        },
        "single_node": net.single_node,
        "largest_clique": [b.lower_note for b in net.largest_clique],
        "clique_size": len(net.largest_clique),
        "dropped_components": net.dropped_components,
    }
