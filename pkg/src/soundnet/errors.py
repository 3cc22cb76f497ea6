"""Exception types raised across the pipeline."""


class SoundnetError(Exception):
    """Base class for all library errors."""


# --- WAV decoding ---

class UnsupportedFormat(SoundnetError):
    """Compression code other than integer PCM / IEEE float, or an unsupported bit depth."""


class CorruptHeader(SoundnetError):
    """RIFF structure is inconsistent (bad magic, chunk sizes, missing chunks)."""


class EmptyAudio(SoundnetError):
    """The data chunk holds zero frames."""


# --- spectral ---

class EmptyInput(SoundnetError):
    """Transform requested on an empty sample sequence."""


# --- distribution fitting ---

class InsufficientData(SoundnetError):
    """Fewer samples than the fitting minimum (20)."""


class DegenerateData(SoundnetError):
    """All samples identical; no family can be fitted."""


class NonConvergence(SoundnetError):
    """Simplex search hit the iteration cap. Carries the best fit found so far."""

    def __init__(self, message, fit=None):
        super().__init__(message)
        self.fit = fit


class AllFitsFailed(SoundnetError):
    """Every candidate family errored or failed to converge."""


# --- network of sounds ---

class NonPositiveFrequency(SoundnetError):
    """Frequencies must be > 0 Hz to map onto the pitch grid."""


class EmptyNetwork(SoundnetError):
    """No in-range frequency components left to build a network from."""


class SingleNode(SoundnetError):
    """Degree centrality is undefined on a one-node network."""


# --- corpus comparison ---

class DegenerateInput(SoundnetError):
    """Rank correlation undefined (constant vector)."""
