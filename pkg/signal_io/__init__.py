from .export import OutputPaths, read_labels, read_stats, write_labels, write_outputs, write_sweep
from .ingest import IngestSpec, Recording, load_trace, write_trace
from .report import ChannelReport, DetectionReport, analyse_trace, build_report

__all__ = [
    'IngestSpec',
    'Recording',
    'load_trace',
    'write_trace',
    'ChannelReport',
    'DetectionReport',
    'analyse_trace',
    'build_report',
    'OutputPaths',
    'write_outputs',
    'read_stats',
    'write_labels',
    'read_labels',
    'write_sweep',
]
