"""Exactly-once file sink: append N-Triples records, commit atomically.

Per batch: truncate the data files back to the last committed lengths
(discarding any torn tail a crash left behind), append the new records,
then atomically replace the manifest holding positions and file lengths.
Replays after any crash point therefore produce no duplicates and no gaps.
Records that fail to parse as a single N-Triples statement go to a
dead-letter file; the position still advances past them.
"""

import json
import os
from dataclasses import dataclass
from pathlib import Path

from ..errors import ParseError, UnsupportedFeatureError, VitalcepError
from ..rdf import parse_ntriples
from .broker import ConsumerPosition, StreamBus


class SinkCrash(VitalcepError):
    """Injected crash; the sink process is assumed gone afterwards."""


#: supported crash injection points
CRASH_BEFORE_WRITE = "before-write"
CRASH_AFTER_WRITE = "after-write"  # data written, manifest not committed


@dataclass
class SinkResult:
    records_written: int
    dead_lettered: int
    batches: int
    position: ConsumerPosition


def _manifest_path(target: Path) -> Path:
    return target.with_name(target.name + ".manifest.json")


def _dead_letter_path(target: Path) -> Path:
    return target.with_name(target.name + ".deadletter")


def _load_manifest(target: Path, bus: StreamBus, group: str, topic: str):
    manifest_path = _manifest_path(target)
    if manifest_path.exists():
        data = json.loads(manifest_path.read_text("utf-8"))
        position = ConsumerPosition(group, topic, tuple(data["offsets"]))
        return position, data["data_length"], data["deadletter_length"]
    return bus.new_position(group, topic), 0, 0


def _commit_manifest(target: Path, position: ConsumerPosition, data_len: int, dead_len: int):
    manifest_path = _manifest_path(target)
    tmp = manifest_path.with_suffix(".tmp")
    tmp.write_text(
        json.dumps(
            {
                "offsets": list(position.offsets),
                "data_length": data_len,
                "deadletter_length": dead_len,
            }
        ),
        "utf-8",
    )
    os.replace(tmp, manifest_path)


def _truncate_to(path: Path, length: int):
    if not path.exists():
        path.write_bytes(b"")
    with open(path, "r+b") as fh:
        fh.truncate(length)


def sink_to_store(
    bus: StreamBus,
    topic: str,
    group: str,
    target: str | Path,
    batch_size: int = 100,
    max_batches: int | None = None,
    crash_at: tuple[int, str] | None = None,
) -> SinkResult:
    """Drain the topic into an N-Triples file with exactly-once semantics.

    ``crash_at=(batch_index, point)`` raises SinkCrash at the given point of
    the given 0-based batch, leaving on-disk state exactly as a real crash
    would; a subsequent call resumes cleanly from the manifest.
    """
    target = Path(target)
    dead = _dead_letter_path(target)
    position, data_len, dead_len = _load_manifest(target, bus, group, topic)
    # roll back torn tails from a previous crash
    _truncate_to(target, data_len)
    _truncate_to(dead, dead_len)

    written = 0
    dead_lettered = 0
    batches = 0
    while max_batches is None or batches < max_batches:
        records, new_position = bus.consume(position, max_records=batch_size)
        if not records:
            break
        if crash_at is not None and crash_at == (batches, CRASH_BEFORE_WRITE):
            raise SinkCrash(f"injected crash before write, batch {batches}")

        good_lines = []
        dead_lines = []
        for _, record in records:
            text = record.payload.decode("utf-8", errors="replace").strip()
            try:
                parsed = parse_ntriples(text)
                if len(parsed) != 1:
                    raise ParseError("expected exactly one statement")
                good_lines.append(text)
            except (ParseError, UnsupportedFeatureError):
                dead_lines.append(text)

        with open(target, "ab") as fh:
            for line in good_lines:
                fh.write(line.encode("utf-8") + b"\n")
            fh.flush()
            os.fsync(fh.fileno())
        if dead_lines:
            with open(dead, "ab") as fh:
                for line in dead_lines:
                    fh.write(line.encode("utf-8") + b"\n")
                fh.flush()
                os.fsync(fh.fileno())
        if crash_at is not None and crash_at == (batches, CRASH_AFTER_WRITE):
            raise SinkCrash(f"injected crash after write, batch {batches}")

        data_len = target.stat().st_size
        dead_len = dead.stat().st_size if dead.exists() else 0
        position = new_position
        _commit_manifest(target, position, data_len, dead_len)
        written += len(good_lines)
        dead_lettered += len(dead_lines)
        batches += 1
    return SinkResult(written, dead_lettered, batches, position)
