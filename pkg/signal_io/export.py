"""
Writing detection results.

Files produced for one recording:

  mask file      index,flag_h,flag_v[,flag_union]   one row per sample, flags 0/1,
                                                     empty when a channel was not analysed
  segments file  channel,start_index,end_index,start_time_s,end_time_s,peak_im
  stats file     JSON: config echo, per-channel summary, warnings and, with
                 emit_im, the per-window IM series
  im file        index,time_s,position_h,im_h,flag_h,position_v,im_v,flag_v,pupil
                 (only with emit_im; im at index i is the window starting at i)

Floats are written with the shortest text that round-trips a double.
"""
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd

from rioneps.exceptions import IngestError

from .report import CHANNEL_CODES, DetectionReport

logger = logging.getLogger('rioneps')

STATS_FORMAT = 'rioneps-stats'
STATS_VERSION = 1
SEGMENT_COLUMNS = ['channel', 'start_index', 'end_index', 'start_time_s', 'end_time_s', 'peak_im']


@dataclass(frozen=True)
class OutputPaths:
    mask: Path
    segments: Path
    stats: Path
    im: Optional[Path] = None

    @classmethod
    def from_mask_path(cls, mask_path, with_im=False):
        """mask.csv -> mask.csv, mask_segments.csv, mask_stats.json[, mask_im.csv]"""
        mask_path = Path(mask_path)
        stem = mask_path.with_suffix('')
        return cls(
            mask=mask_path,
            segments=Path(f"{stem}_segments.csv"),
            stats=Path(f"{stem}_stats.json"),
            im=Path(f"{stem}_im.csv") if with_im else None,
        )

    def written(self):
        return [path for path in (self.mask, self.segments, self.stats, self.im) if path is not None]


def _flag_column(mask, length):
    if mask is None:
        return pd.Series(pd.array([pd.NA] * length, dtype='Int8'))
    return pd.Series(mask.flags.astype(np.int8))


def _prepare(path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_mask(report: DetectionReport, path):
    columns = {'index': np.arange(report.length)}
    for code in CHANNEL_CODES:
        columns[f"flag_{code}"] = _flag_column(report.mask(code), report.length)
    if report.union is not None:
        columns['flag_union'] = _flag_column(report.union, report.length)
    pd.DataFrame(columns).to_csv(_prepare(path), index=False)


def segment_records(report: DetectionReport):
    records = []
    for code, channel in report.channels.items():
        for segment in channel.segments:
            records.append({'channel': code, **segment.as_dict()})
    return records


def write_segments(report: DetectionReport, path):
    frame = pd.DataFrame(segment_records(report), columns=SEGMENT_COLUMNS)
    frame.to_csv(_prepare(path), index=False)


def stats_document(report: DetectionReport, emit_im=False):
    channels = {}
    for code, channel in report.channels.items():
        summary = channel.summary
        entry = {
            'channel': channel.trace.channel.value,
            'unit_label': channel.trace.unit_label,
            'sample_count': summary.sample_count,
            'missing_count': summary.missing_count,
            'window_count': summary.window_count,
            'max_im': summary.max_im,
            'flagged_count': summary.flagged_count,
            'flagged_fraction': summary.flagged_fraction,
            'segment_count': len(summary.segments),
        }
        if emit_im:
            entry['im'] = channel.series.im.tolist()
        channels[code] = entry
    document = {
        'format': STATS_FORMAT,
        'version': STATS_VERSION,
        'source': report.source,
        'length': report.length,
        'config': report.config.as_dict(),
        'channels': channels,
        'warnings': list(report.warnings),
    }
    if report.union is not None:
        document['union'] = {
            'flagged_count': report.union.flagged_count,
            'flagged_fraction': report.union.flagged_fraction,
        }
    return document


def write_stats(report: DetectionReport, path, emit_im=False):
    with open(_prepare(path), 'w') as handle:
        json.dump(stats_document(report, emit_im=emit_im), handle, indent=2)


def read_stats(path):
    """Load a stats file; IM series come back as numpy arrays."""
    with open(path) as handle:
        document = json.load(handle)
    for entry in document.get('channels', {}).values():
        if 'im' in entry:
            entry['im'] = np.asarray(entry['im'], dtype=np.float64)
    return document


def _per_sample_im(series, length):
    values = np.full(length, np.nan)
    values[:len(series)] = series.im
    return values


def write_im_table(report: DetectionReport, path):
    length = report.length
    time_s = report.time_s if report.time_s is not None else np.arange(length) / report.config.sample_rate_hz
    columns = {'index': np.arange(length), 'time_s': time_s}
    for code in CHANNEL_CODES:
        channel = report.channels.get(code)
        if channel is None:
            empty = np.full(length, np.nan)
            columns[f"position_{code}"] = empty
            columns[f"im_{code}"] = empty
        else:
            columns[f"position_{code}"] = channel.trace.samples
            columns[f"im_{code}"] = _per_sample_im(channel.series, length)
        columns[f"flag_{code}"] = _flag_column(report.mask(code), length)
    columns['pupil'] = report.pupil if report.pupil is not None else np.full(length, np.nan)
    pd.DataFrame(columns).to_csv(_prepare(path), index=False)


def write_outputs(report: DetectionReport, paths: OutputPaths, emit_im=False):
    """Write mask, segments and stats files (and the IM table when emit_im)."""
    try:
        write_mask(report, paths.mask)
        write_segments(report, paths.segments)
        write_stats(report, paths.stats, emit_im=emit_im)
        if emit_im and paths.im is not None:
            write_im_table(report, paths.im)
    except OSError as exc:
        logger.error(f"Error writing detection outputs: {exc}")
        raise
    logger.info(f"Wrote detection outputs: {', '.join(str(path) for path in paths.written())}")


def write_labels(labels, path):
    """Ground-truth labels as `index,label` rows (0/1)."""
    flags = np.asarray(getattr(labels, 'flags', labels), dtype=bool)
    frame = pd.DataFrame({'index': np.arange(flags.shape[0]), 'label': flags.astype(np.int8)})
    frame.to_csv(_prepare(path), index=False)


def read_labels(path):
    try:
        frame = pd.read_csv(path)
        return frame['label'].to_numpy().astype(bool)
    except (OSError, KeyError, ValueError, pd.errors.ParserError) as exc:
        raise IngestError(f"cannot read labels: {exc}", path=path)


def write_sweep(result, path):
    """Calibration sweep table, one row per threshold."""
    pd.DataFrame(result.rows_as_records()).to_csv(_prepare(path), index=False)
