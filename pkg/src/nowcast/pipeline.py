"""Raw station CSV files to leakage-safe, normalized, windowed datasets.

The stages compose in a fixed order: parse -> resample_hourly ->
filter_monsoon (optional) -> make_windows -> split_chronological ->
fit_normalizer / apply_normalizer. Every stage is a pure function of its
inputs; series carry their records in explicit segments so gaps never get
windowed across.

Window rows are timestep-major: all five features for the oldest hour
first, ending with the five features of the anchor hour, so a row is
lookback * 5 wide (120 for a 24-hour lookback). The target is the rain
flag ``horizon`` hours after the anchor.
"""

import csv
import io
import math
import struct
import warnings
from dataclasses import dataclass, replace
from datetime import datetime, timedelta

import numpy as np

from ._io import atomic_write_bytes
from .errors import (
    CorruptContainer,
    DegenerateSplit,
    DuplicateTimestampWarning,
    MalformedRow,
    NoData,
    NonMonotonicWarning,
    SegmentTooShortWarning,
)

FEATURES = ("temperature", "wind_speed", "humidity", "pressure", "rain")
FEATURE_COUNT = len(FEATURES)
RAIN_INDEX = FEATURES.index("rain")
HOUR = timedelta(hours=1)
MAX_FILL_HOURS = 6              # longer gaps split the series instead
CLAMP_LO, CLAMP_HI = -0.5, 1.5  # bounds for normalized out-of-range test values
DEFAULT_MONSOON_MONTHS = frozenset({6, 7, 8, 9})
RAIN_KEYWORDS = ("rain", "drizzle", "thunderstorm")

CONTAINER_MAGIC = b"NWC1"

INDIAN_HEADER = (
    "year", "month", "date", "time", "temp", "windspeed", "humidity", "pressure", "rainfall",
)
KAGGLE_PARAMETERS = (
    "temperature", "wind_speed", "humidity", "pressure", "weather_description",
)


@dataclass(frozen=True)
class Observation:
    """One station record. ``filled`` marks gap-filled synthetic hours."""

    timestamp: datetime
    temperature: float
    wind_speed: float
    humidity: float
    pressure: float
    rain: int
    filled: bool = False

    def __post_init__(self):
        if not 0.0 <= self.humidity <= 100.0:
            raise ValueError(f"humidity {self.humidity} outside [0, 100]")
        if self.pressure <= 0.0:
            raise ValueError(f"pressure {self.pressure} must be positive")
        if self.rain not in (0, 1):
            raise ValueError(f"rain flag {self.rain} not in {{0, 1}}")

    def features(self):
        return (self.temperature, self.wind_speed, self.humidity, self.pressure, float(self.rain))


@dataclass
class ObservationSeries:
    """Time-ordered records grouped into gap-free segments.

    ``cadence`` is None for raw (possibly sub-hourly) data and one hour
    after ``resample_hourly``.
    """

    station_id: str
    segments: list
    cadence: timedelta | None = None

    @property
    def records(self):
        return [o for seg in self.segments for o in seg]

    @property
    def n_records(self):
        return sum(len(seg) for seg in self.segments)


@dataclass(frozen=True)
class WindowConfig:
    lookback: int
    horizon: int
    features: int = FEATURE_COUNT

    def __post_init__(self):
        if self.lookback < 1 or self.horizon < 1 or self.features < 1:
            raise ValueError("lookback, horizon, and features must be >= 1")

    @property
    def width(self):
        return self.lookback * self.features


@dataclass(frozen=True)
class NormStats:
    """Per-feature (min, max) fitted on training rows only."""

    mins: np.ndarray
    maxs: np.ndarray

    def close_to(self, other):
        return (
            other is not None
            and np.allclose(self.mins, other.mins)
            and np.allclose(self.maxs, other.maxs)
        )


@dataclass
class WindowedDataset:
    """Supervised matrix of flattened lookback windows and binary targets.

    ``anchors`` holds each row's anchor hour as unix seconds; it is None
    for datasets loaded from a container (the binary format does not carry
    timestamps, so split before saving). ``norm_stats`` is None until
    ``apply_normalizer`` has run.
    """

    inputs: np.ndarray
    targets: np.ndarray
    config: WindowConfig
    anchors: np.ndarray | None = None
    norm_stats: NormStats | None = None

    @property
    def n_rows(self):
        return int(self.inputs.shape[0])

    @property
    def width(self):
        return int(self.inputs.shape[1])

    def positive_rate(self):
        return float(self.targets.mean()) if self.n_rows else 0.0


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.8
    policy: str = "chronological"

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must be in (0, 1)")
        if self.policy != "chronological":
            raise ValueError(f"unknown split policy {self.policy!r}")


@dataclass(frozen=True)
class LabelRule:
    """How a raw rainfall label becomes {0, 1}.

    numeric_passthrough: any nonzero numeric label is 1.
    keyword_match: 1 iff the lowercased description contains a keyword;
    unknown descriptions map to 0.
    """

    kind: str
    keywords: tuple = RAIN_KEYWORDS

    @classmethod
    def numeric_passthrough(cls):
        return cls(kind="numeric")

    @classmethod
    def keyword_match(cls, keywords=RAIN_KEYWORDS):
        return cls(kind="keywords", keywords=tuple(k.lower() for k in keywords))


def binarize_rain(raw_label, rule):
    """Collapse a raw rainfall label (number or description) to {0, 1}."""
    if rule.kind == "numeric":
        return int(float(raw_label) != 0.0)
    if rule.kind == "keywords":
        text = str(raw_label).lower()
        return int(any(k in text for k in rule.keywords))
    raise ValueError(f"unknown label rule {rule.kind!r}")


def _as_text_lines(source):
    """Accept a path string, raw bytes, or file-like object; return a text stream."""
    if isinstance(source, bytes):
        return io.StringIO(source.decode("utf-8"))
    if isinstance(source, str):
        return open(source, "r", encoding="utf-8", newline="")
    if isinstance(source, io.TextIOBase):
        return source
    # binary stream
    return io.TextIOWrapper(source, encoding="utf-8", newline="")


_EPOCH = datetime(1970, 1, 1)


def _epoch_seconds(ts):
    # timezone-free arithmetic: naive timestamps, fixed epoch
    return int((ts - _EPOCH).total_seconds())


def _finish_series(rows, station_id):
    """Sort, deduplicate, and wrap parsed (timestamp, Observation) rows."""
    if not rows:
        raise NoData("no valid rows parsed")
    times = [o.timestamp for o in rows]
    if any(b < a for a, b in zip(times, times[1:])):
        warnings.warn("records out of order; sorting by timestamp", NonMonotonicWarning)
        rows = sorted(rows, key=lambda o: o.timestamp)  # stable: file order kept among ties
    seen = set()
    unique = []
    dupes = 0
    for obs in rows:
        if obs.timestamp in seen:
            dupes += 1
            continue
        seen.add(obs.timestamp)
        unique.append(obs)
    if dupes:
        warnings.warn(
            f"{dupes} duplicate timestamp(s) collapsed to first occurrence",
            DuplicateTimestampWarning,
        )
    return ObservationSeries(station_id=station_id, segments=[unique], cadence=None)


def _parse_indian(stream, station_id):
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise NoData("empty file") from None
    normalized = tuple(h.strip().lower().replace(" ", "") for h in header)
    if normalized[: len(INDIAN_HEADER)] != INDIAN_HEADER:
        raise MalformedRow(1, f"expected header {INDIAN_HEADER}, got {normalized}")
    rule = LabelRule.numeric_passthrough()
    rows = []
    for line_no, fields in enumerate(reader, start=2):
        if not fields or all(not f.strip() for f in fields):
            continue
        if len(fields) < 9:
            raise MalformedRow(line_no, f"expected 9 columns, got {len(fields)}")
        try:
            year, month, day = int(fields[0]), int(fields[1]), int(fields[2])
            hh, mm = fields[3].strip().split(":")
            ts = datetime(year, month, day, int(hh), int(mm))
            rows.append(
                Observation(
                    timestamp=ts,
                    temperature=float(fields[4]),
                    wind_speed=float(fields[5]),
                    humidity=float(fields[6]),
                    pressure=float(fields[7]),
                    rain=binarize_rain(fields[8], rule),
                )
            )
        except (ValueError, IndexError) as exc:
            raise MalformedRow(line_no, str(exc)) from None
    return _finish_series(rows, station_id or "indian-station")


def _parse_kaggle_table(stream, city, what, numeric):
    """One wide parameter file: datetime column plus one column per city."""
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise NoData(f"empty {what} file") from None
    columns = [h.strip() for h in header]
    try:
        col = columns.index(city)
    except ValueError:
        raise NoData(f"city {city!r} not in {what} columns {columns[1:]}") from None
    values = {}
    for line_no, fields in enumerate(reader, start=2):
        if not fields or all(not f.strip() for f in fields):
            continue
        raw = fields[col].strip() if col < len(fields) else ""
        if not raw:
            continue  # missing cell: that hour is simply absent for this parameter
        try:
            ts = datetime.strptime(fields[0].strip(), "%Y-%m-%d %H:%M:%S")
            values[ts] = (float(raw) if numeric else raw, line_no)
        except ValueError as exc:
            raise MalformedRow(line_no, f"{what}: {exc}") from None
    return values


def _parse_kaggle(tables, city, station_id):
    missing = [p for p in KAGGLE_PARAMETERS if p not in tables]
    if missing:
        raise NoData(f"kaggle schema needs files for {missing}")
    parsed = {
        p: _parse_kaggle_table(
            _as_text_lines(tables[p]), city, p, numeric=(p != "weather_description")
        )
        for p in KAGGLE_PARAMETERS
    }
    shared = set.intersection(*(set(v) for v in parsed.values()))
    rule = LabelRule.keyword_match()
    rows = []
    for ts in sorted(shared):
        try:
            rows.append(
                Observation(
                    timestamp=ts,
                    temperature=parsed["temperature"][ts][0],
                    wind_speed=parsed["wind_speed"][ts][0],
                    humidity=parsed["humidity"][ts][0],
                    pressure=parsed["pressure"][ts][0],
                    rain=binarize_rain(parsed["weather_description"][ts][0], rule),
                )
            )
        except ValueError as exc:
            line_no = parsed["temperature"][ts][1]
            raise MalformedRow(line_no, str(exc)) from None
    return _finish_series(rows, station_id or city)


def parse_raw_csv(source, schema="indian", city=None, station_id=None):
    """Parse raw weather CSV data into a single-segment ObservationSeries.

    schema 'indian' takes one stream/path with columns
    Year,Month,Date,Time,Temp,WindSpeed,Humidity,Pressure,Rainfall.
    schema 'kaggle_city' takes a mapping of parameter name
    (temperature, wind_speed, humidity, pressure, weather_description) to
    stream/path, each a wide table keyed by datetime with one column per
    city; ``city`` selects the column and the description is keyword-
    binarized into the rain flag.
    """
    if schema == "indian":
        stream = _as_text_lines(source)
        try:
            return _parse_indian(stream, station_id)
        finally:
            if isinstance(source, str):
                stream.close()
    if schema in ("kaggle_city", "kaggle"):
        if city is None:
            raise ValueError("kaggle schema needs a city")
        return _parse_kaggle(source, city, station_id)
    raise ValueError(f"unknown schema {schema!r}")


def _hour_floor(ts):
    return ts.replace(minute=0, second=0, microsecond=0)


def resample_hourly(series):
    """Reduce to one record per clock hour and make segments gap-free.

    Continuous features take the earliest record in the hour; rain is the
    max over the hour. Up to six consecutive missing hours are forward-
    filled (continuous features copied, rain forced to 0, ``filled`` set);
    longer gaps split the segment.
    """
    out_segments = []
    for seg in series.segments:
        if not seg:
            continue
        hourly = []
        current_hour = None
        rains = []
        first = None
        for obs in seg:
            hour = _hour_floor(obs.timestamp)
            if hour != current_hour:
                if current_hour is not None:
                    hourly.append(replace(first, timestamp=current_hour, rain=max(rains)))
                current_hour = hour
                first = obs
                rains = [obs.rain]
            else:
                rains.append(obs.rain)
        hourly.append(replace(first, timestamp=current_hour, rain=max(rains)))

        segment = [hourly[0]]
        for obs in hourly[1:]:
            gap = int((obs.timestamp - segment[-1].timestamp) / HOUR) - 1
            if gap == 0:
                segment.append(obs)
            elif 1 <= gap <= MAX_FILL_HOURS:
                prev = segment[-1]
                for step in range(1, gap + 1):
                    segment.append(
                        replace(
                            prev,
                            timestamp=prev.timestamp + step * HOUR,
                            rain=0,
                            filled=True,
                        )
                    )
                segment.append(obs)
            else:
                out_segments.append(segment)
                segment = [obs]
        out_segments.append(segment)
    return ObservationSeries(series.station_id, out_segments, cadence=HOUR)


def filter_monsoon(series, months=DEFAULT_MONSOON_MONTHS):
    """Keep records whose month is in ``months``; each retained contiguous
    run becomes its own segment."""
    months = frozenset(int(m) for m in months)
    if not months:
        raise ValueError("months must be nonempty")
    out_segments = []
    for seg in series.segments:
        run = []
        for obs in seg:
            if obs.timestamp.month in months:
                run.append(obs)
            elif run:
                out_segments.append(run)
                run = []
        if run:
            out_segments.append(run)
    if not any(out_segments):
        raise NoData(f"no records in months {sorted(months)}")
    return ObservationSeries(series.station_id, out_segments, cadence=series.cadence)


def make_windows(series, cfg):
    """Reframe an hourly series into flattened supervised rows.

    A segment of length M yields M - lookback - horizon + 1 rows; shorter
    segments are skipped with a SegmentTooShortWarning. Row t covers hours
    t-lookback+1 .. t (timestep-major) and its target is the rain flag at
    t + horizon.
    """
    if series.cadence != HOUR:
        raise ValueError("make_windows needs an hourly-resampled series")
    L, h, F = cfg.lookback, cfg.horizon, cfg.features
    if F != FEATURE_COUNT:
        raise ValueError(f"this pipeline produces {FEATURE_COUNT} features per hour")
    inputs = []
    targets = []
    anchors = []
    for seg in series.segments:
        M = len(seg)
        count = M - L - h + 1
        if count < 1:
            warnings.warn(
                f"segment of {M} hour(s) shorter than lookback+horizon = {L + h}; skipped",
                SegmentTooShortWarning,
            )
            continue
        feats = np.array([obs.features() for obs in seg])
        windows = np.lib.stride_tricks.sliding_window_view(feats, (L, F))[:count, 0]
        inputs.append(windows.reshape(count, L * F))
        targets.append(feats[L - 1 + h:L - 1 + h + count, RAIN_INDEX].astype(np.uint8))
        anchors.append(
            np.array(
                [_epoch_seconds(obs.timestamp) for obs in seg[L - 1:L - 1 + count]],
                dtype=np.int64,
            )
        )
    if not inputs:
        return WindowedDataset(
            inputs=np.zeros((0, L * F)),
            targets=np.zeros(0, dtype=np.uint8),
            config=cfg,
            anchors=np.zeros(0, dtype=np.int64),
        )
    return WindowedDataset(
        inputs=np.concatenate(inputs),
        targets=np.concatenate(targets),
        config=cfg,
        anchors=np.concatenate(anchors),
    )


def split_chronological(ds, spec=SplitSpec()):
    """Earliest ceil(N * train_fraction) rows by anchor time go to train,
    the rest to test; raises DegenerateSplit if either side is empty."""
    if ds.anchors is None:
        raise ValueError("dataset has no anchor times; split before saving containers")
    n = ds.n_rows
    order = np.argsort(ds.anchors, kind="stable")
    n_train = int(math.ceil(n * spec.train_fraction))
    if n_train == 0 or n_train >= n:
        raise DegenerateSplit(
            f"fraction {spec.train_fraction} on {n} rows leaves an empty side"
        )
    def take(idx):
        return WindowedDataset(
            inputs=ds.inputs[idx].copy(),
            targets=ds.targets[idx].copy(),
            config=ds.config,
            anchors=ds.anchors[idx].copy(),
            norm_stats=ds.norm_stats,
        )
    return take(order[:n_train]), take(order[n_train:])


def fit_normalizer(train):
    """Per-feature (min, max) over every timestep of every training row."""
    if train.n_rows == 0:
        raise NoData("cannot fit normalization on an empty dataset")
    F = train.config.features
    per_feature = train.inputs.reshape(train.n_rows, -1, F)
    return NormStats(
        mins=per_feature.min(axis=(0, 1)),
        maxs=per_feature.max(axis=(0, 1)),
    )


def apply_normalizer(ds, stats):
    """Min-max scale each feature; constant features map to 0; values from
    outside the fitted range are clamped to [-0.5, 1.5].

    Already-normalized datasets pass through unchanged (idempotent), but
    only under the same statistics.
    """
    if ds.norm_stats is not None:
        if stats.close_to(ds.norm_stats):
            return ds
        raise ValueError("dataset already normalized with different statistics")
    F = ds.config.features
    span = stats.maxs - stats.mins
    safe = np.where(span == 0.0, 1.0, span)
    x = ds.inputs.reshape(ds.n_rows, -1, F)
    scaled = (x - stats.mins) / safe
    scaled[..., span == 0.0] = 0.0
    scaled = np.clip(scaled, CLAMP_LO, CLAMP_HI)
    return WindowedDataset(
        inputs=scaled.reshape(ds.n_rows, -1),
        targets=ds.targets.copy(),
        config=ds.config,
        anchors=None if ds.anchors is None else ds.anchors.copy(),
        norm_stats=stats,
    )


def save_windowed(ds, path):
    """Write the flat binary container: magic NWC1, uint32 N/L/F/h, then
    row-major float64 inputs, N target bytes, and F (min, max) float64
    pairs (NaN pairs when unnormalized). Little-endian throughout."""
    n = ds.n_rows
    cfg = ds.config
    parts = [
        CONTAINER_MAGIC,
        struct.pack("<IIII", n, cfg.lookback, cfg.features, cfg.horizon),
        np.ascontiguousarray(ds.inputs, dtype="<f8").tobytes(),
        np.ascontiguousarray(ds.targets, dtype=np.uint8).tobytes(),
    ]
    if ds.norm_stats is None:
        pairs = np.full((cfg.features, 2), np.nan)
    else:
        pairs = np.stack([ds.norm_stats.mins, ds.norm_stats.maxs], axis=1)
    parts.append(np.ascontiguousarray(pairs, dtype="<f8").tobytes())
    atomic_write_bytes(path, b"".join(parts))


def load_windowed(path):
    """Read a container written by save_windowed; anchors are not stored."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != CONTAINER_MAGIC:
        raise CorruptContainer(f"bad magic in {path}")
    if len(blob) < 20:
        raise CorruptContainer(f"truncated header in {path}")
    n, lookback, features, horizon = struct.unpack("<IIII", blob[4:20])
    cfg = WindowConfig(lookback=lookback, horizon=horizon, features=features)
    need = 20 + n * cfg.width * 8 + n + features * 16
    if len(blob) != need:
        raise CorruptContainer(f"{path}: expected {need} bytes, found {len(blob)}")
    off = 20
    inputs = np.frombuffer(blob, dtype="<f8", count=n * cfg.width, offset=off)
    inputs = inputs.reshape(n, cfg.width).copy()
    off += n * cfg.width * 8
    targets = np.frombuffer(blob, dtype=np.uint8, count=n, offset=off).copy()
    off += n
    pairs = np.frombuffer(blob, dtype="<f8", count=features * 2, offset=off)
    pairs = pairs.reshape(features, 2)
    stats = None
    if not np.isnan(pairs).all():
        stats = NormStats(mins=pairs[:, 0].copy(), maxs=pairs[:, 1].copy())
    return WindowedDataset(
        inputs=inputs, targets=targets, config=cfg, anchors=None, norm_stats=stats
    )
