"""In-process partitioned, replicated publish-subscribe log.

Brokers hold replica logs per (topic, partition); an append acknowledges
only once every live replica holds it, so any surviving replica can serve
the full acknowledged prefix. Failure marks a broker dead without touching
its storage; recovery re-syncs the broker from the current leader before it
rejoins. Leader election is deterministic: lowest live broker id.
"""

import threading
from dataclasses import dataclass, field, replace

from ..errors import VitalcepError
from ..rdf.store import stable_hash


class TopicError(VitalcepError):
    """Unknown or misconfigured topic."""


class UnavailableError(VitalcepError):
    """No live replica can serve the partition; the producer may retry."""


@dataclass(frozen=True)
class Record:
    offset: int
    key: str | None
    payload: bytes


@dataclass
class Topic:
    name: str
    partitions: int
    replication: int
    # partition -> ordered replica broker ids
    replicas: dict[int, tuple[str, ...]] = field(default_factory=dict)
    round_robin: int = 0


@dataclass(frozen=True)
class ConsumerPosition:
    """Per-partition next offsets for one consumer group over one topic."""

    group: str
    topic: str
    offsets: tuple[int, ...]

    def advanced(self, partition: int, new_offset: int) -> "ConsumerPosition":
        offsets = list(self.offsets)
        offsets[partition] = new_offset
        return replace(self, offsets=tuple(offsets))


class Broker:
    def __init__(self, broker_id: str):
        self.broker_id = broker_id
        self.alive = True
        # (topic, partition) -> list of records (disk survives failure)
        self.logs: dict[tuple[str, int], list[Record]] = {}

    def log(self, topic: str, partition: int) -> list[Record]:
        return self.logs.setdefault((topic, partition), [])


class StreamBus:
    """Broker set plus topic metadata; all calls are thread safe."""

    def __init__(self, broker_ids: tuple[str, ...] = ("A", "B", "C")):
        if not broker_ids:
            raise ValueError("need at least one broker")
        self._lock = threading.RLock()
        self.brokers = {bid: Broker(bid) for bid in broker_ids}
        self.topics: dict[str, Topic] = {}
        self._partition_locks: dict[tuple[str, int], threading.Lock] = {}

    # -- topology -------------------------------------------------------------

    def create_topic(self, name: str, partitions: int = 1, replication: int = 1) -> Topic:
        with self._lock:
            if name in self.topics:
                raise TopicError(f"topic {name!r} already exists")
            ids = sorted(self.brokers)
            if not 1 <= replication <= len(ids):
                raise TopicError(
                    f"replication {replication} outside 1..{len(ids)} brokers"
                )
            if partitions < 1:
                raise TopicError("partitions must be >= 1")
            topic = Topic(name, partitions, replication)
            for p in range(partitions):
                topic.replicas[p] = tuple(ids[(p + i) % len(ids)] for i in range(replication))
                self._partition_locks[(name, p)] = threading.Lock()
            self.topics[name] = topic
            return topic

    def _topic(self, name: str) -> Topic:
        topic = self.topics.get(name)
        if topic is None:
            raise TopicError(f"no such topic: {name!r}")
        return topic

    def live_replicas(self, topic: str, partition: int) -> list[Broker]:
        t = self._topic(topic)
        return [
            self.brokers[bid] for bid in t.replicas[partition] if self.brokers[bid].alive
        ]

    def leader(self, topic: str, partition: int) -> Broker:
        live = self.live_replicas(topic, partition)
        if not live:
            raise UnavailableError(f"partition {topic}[{partition}] has no live replica")
        return min(live, key=lambda b: b.broker_id)

    # -- produce / consume ------------------------------------------------------

    def partition_for(self, topic: str, key: str | None) -> int:
        t = self._topic(topic)
        if key is not None:
            return stable_hash(key) % t.partitions
        with self._lock:
            p = t.round_robin % t.partitions
            t.round_robin += 1
            return p

    def produce(self, topic: str, payload: bytes, key: str | None = None) -> tuple[int, int]:
        """Append one record; returns (partition, offset) once all live
        replicas hold it. Raises UnavailableError when none are live."""
        t = self._topic(topic)
        partition = self.partition_for(topic, key)
        with self._partition_locks[(topic, partition)]:
            live = self.live_replicas(topic, partition)
            if not live:
                raise UnavailableError(
                    f"partition {topic}[{partition}] has no live replica"
                )
            offset = len(self.leader(topic, partition).log(topic, partition))
            record = Record(offset, key, bytes(payload))
            for broker in live:
                log = broker.log(topic, partition)
                assert len(log) == offset, "replica logs diverged"
                log.append(record)
            return partition, offset

    def end_offsets(self, topic: str) -> list[int]:
        t = self._topic(topic)
        out = []
        for p in range(t.partitions):
            with self._partition_locks[(topic, p)]:
                out.append(len(self.leader(topic, p).log(topic, p)))
        return out

    def new_position(self, group: str, topic: str) -> ConsumerPosition:
        t = self._topic(topic)
        return ConsumerPosition(group, topic, (0,) * t.partitions)

    def consume(
        self, position: ConsumerPosition, max_records: int = 100
    ) -> tuple[list[tuple[int, Record]], ConsumerPosition]:
        """Fetch records in offset order per partition from the position.

        Partitions are drained round-robin in index order; re-consuming from
        the same saved position re-delivers identically. An unavailable
        partition stalls (delivers nothing) rather than erroring.
        """
        t = self._topic(position.topic)
        out: list[tuple[int, Record]] = []
        pos = position
        for p in range(t.partitions):
            if len(out) >= max_records:
                break
            with self._partition_locks[(position.topic, p)]:
                live = self.live_replicas(position.topic, p)
                if not live:
                    continue  # stall until a replica comes back
                log = min(live, key=lambda b: b.broker_id).log(position.topic, p)
                start = pos.offsets[p]
                take = log[start : start + (max_records - len(out))]
            for record in take:
                out.append((p, record))
            if take:
                pos = pos.advanced(p, take[-1].offset + 1)
        return out, pos

    # -- failure handling -------------------------------------------------------

    def fail_broker(self, broker_id: str):
        with self._lock:
            broker = self._broker(broker_id)
            broker.alive = False

    def recover_broker(self, broker_id: str):
        """Bring a broker back: re-sync every replica it hosts from the
        current leader's prefix, then mark it live."""
        with self._lock:
            broker = self._broker(broker_id)
            if broker.alive:
                return
            for name, topic in self.topics.items():
                for p, replica_ids in topic.replicas.items():
                    if broker_id not in replica_ids:
                        continue
                    with self._partition_locks[(name, p)]:
                        live = self.live_replicas(name, p)
                        if live:
                            leader = min(live, key=lambda b: b.broker_id)
                            broker.logs[(name, p)] = list(leader.log(name, p))
                        # no live replica: keep own (possibly stale) log
            broker.alive = True

    def _broker(self, broker_id: str) -> Broker:
        broker = self.brokers.get(broker_id)
        if broker is None:
            raise VitalcepError(f"no such broker: {broker_id!r}")
        return broker

    def alive_brokers(self) -> list[str]:
        return sorted(bid for bid, b in self.brokers.items() if b.alive)
