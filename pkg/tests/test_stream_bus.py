import random
import threading
from pathlib import Path

import pytest

from vitalcep.bus import (
    CRASH_AFTER_WRITE,
    CRASH_BEFORE_WRITE,
    SinkCrash,
    StreamBus,
    TopicError,
    UnavailableError,
    sink_to_store,
)
from vitalcep.rdf import parse_ntriples


def make_bus(partitions=3, replication=3):
    bus = StreamBus(("A", "B", "C"))
    bus.create_topic("t", partitions=partitions, replication=replication)
    return bus


def drain(bus, group="g", topic="t"):
    position = bus.new_position(group, topic)
    out = []
    while True:
        records, position = bus.consume(position, max_records=97)
        if not records:
            return out, position
        out.extend(records)


def rdf_payload(i: int) -> bytes:
    return f'<http://x/s{i}> <http://x/p> "v{i}" .'.encode()


class TestTopics:
    def test_topic_must_exist(self):
        bus = StreamBus()
        with pytest.raises(TopicError):
            bus.produce("nope", b"x")

    def test_duplicate_topic_rejected(self):
        bus = make_bus()
        with pytest.raises(TopicError):
            bus.create_topic("t")

    def test_replication_bounded_by_broker_count(self):
        bus = StreamBus(("A", "B"))
        with pytest.raises(TopicError):
            bus.create_topic("t", replication=3)


class TestProduce:
    def test_first_record_gets_offset_zero(self):
        bus = make_bus(partitions=1)
        assert bus.produce("t", b"x") == (0, 0)

    def test_same_key_same_partition_dense_offsets(self):
        bus = make_bus()
        p1, o1 = bus.produce("t", b"x", key="k")
        p2, o2 = bus.produce("t", b"y", key="k")
        assert p1 == p2
        assert (o1, o2) == (0, 1)

    def test_keyless_round_robin_balances_within_one(self):
        bus = make_bus(partitions=3)
        for i in range(1000):
            bus.produce("t", rdf_payload(i))
        counts = bus.end_offsets("t")
        assert sum(counts) == 1000
        assert max(counts) - min(counts) <= 1

    def test_offsets_dense_and_gap_free(self):
        bus = make_bus()
        for i in range(50):
            bus.produce("t", rdf_payload(i))
        for p in range(3):
            log = bus.leader("t", p).log("t", p)
            assert [r.offset for r in log] == list(range(len(log)))


class TestConsume:
    def test_consume_three_records_in_order(self):
        bus = make_bus(partitions=1)
        for i in range(3):
            bus.produce("t", rdf_payload(i))
        records, position = bus.consume(bus.new_position("g", "t"), max_records=10)
        assert [r.offset for _, r in records] == [0, 1, 2]
        assert position.offsets == (3,)

    def test_replay_from_saved_position_is_identical(self):
        bus = make_bus()
        for i in range(20):
            bus.produce("t", rdf_payload(i))
        position = bus.new_position("g", "t")
        first, _ = bus.consume(position, max_records=50)
        second, _ = bus.consume(position, max_records=50)
        assert [(p, r.offset, r.payload) for p, r in first] == [
            (p, r.offset, r.payload) for p, r in second
        ]

    def test_groups_are_isolated(self):
        bus = make_bus()
        for i in range(30):
            bus.produce("t", rdf_payload(i))
        a, _ = drain(bus, group="a")
        b, _ = drain(bus, group="b")
        assert len(a) == len(b) == 30

    def test_empty_fetch_when_caught_up(self):
        bus = make_bus()
        _, position = drain(bus)
        records, _ = bus.consume(position)
        assert records == []

    def test_per_partition_fifo(self):
        bus = make_bus()
        for i in range(300):
            bus.produce("t", rdf_payload(i), key=f"k{i % 11}")
        records, _ = drain(bus)
        seen: dict[int, list[int]] = {}
        for p, r in records:
            seen.setdefault(p, []).append(r.offset)
        for offsets in seen.values():
            assert offsets == sorted(offsets)


class TestFailures:
    def test_fail_one_of_three_keeps_everything_flowing(self):
        bus = make_bus()
        for i in range(500):
            bus.produce("t", rdf_payload(i))
        bus.fail_broker("B")
        for i in range(500, 1000):
            bus.produce("t", rdf_payload(i))
        records, _ = drain(bus)
        payloads = [r.payload for _, r in records]
        assert len(payloads) == 1000
        assert len(set(payloads)) == 1000  # exactly once

    def test_fail_last_replica_is_loud(self):
        bus = StreamBus(("A",))
        bus.create_topic("t", partitions=1, replication=1)
        bus.fail_broker("A")
        with pytest.raises(UnavailableError):
            bus.produce("t", b"x")

    def test_fail_then_recover_without_writes_is_bit_identical(self):
        bus = make_bus()
        for i in range(100):
            bus.produce("t", rdf_payload(i))
        before = {k: list(v) for k, v in bus.brokers["B"].logs.items()}
        bus.fail_broker("B")
        bus.recover_broker("B")
        assert bus.brokers["B"].logs == before

    def test_recovered_broker_resyncs_leader_prefix(self):
        bus = make_bus()
        for i in range(50):
            bus.produce("t", rdf_payload(i))
        bus.fail_broker("C")
        for i in range(50, 120):
            bus.produce("t", rdf_payload(i))
        bus.recover_broker("C")
        for p in range(3):
            logs = {
                bid: tuple(bus.brokers[bid].log("t", p))
                for bid in ("A", "B", "C")
            }
            assert len(set(logs.values())) == 1  # prefix consistency

    def test_leadership_moves_to_lowest_live_broker(self):
        bus = make_bus(partitions=1)
        leader_before = bus.leader("t", 0).broker_id
        bus.fail_broker(leader_before)
        leader_after = bus.leader("t", 0).broker_id
        assert leader_after != leader_before
        assert leader_after == min(bus.alive_brokers())

    def test_randomized_single_broker_failure_schedules(self):
        for seed in range(8):
            rng = random.Random(seed)
            bus = make_bus()
            acknowledged = []
            failed: str | None = None
            for i in range(400):
                roll = rng.random()
                if failed is None and roll < 0.01:
                    failed = rng.choice(("A", "B", "C"))
                    bus.fail_broker(failed)
                elif failed is not None and roll > 0.985:
                    bus.recover_broker(failed)
                    failed = None
                payload = rdf_payload(i)
                bus.produce("t", payload, key=f"k{rng.randrange(7)}")
                acknowledged.append(payload)
            if failed:
                bus.recover_broker(failed)
            records, _ = drain(bus)
            delivered = [r.payload for _, r in records]
            assert sorted(delivered) == sorted(acknowledged)
            assert len(set(delivered)) == len(acknowledged)

    def test_concurrent_producers_no_loss_no_duplication(self):
        bus = make_bus()
        errors = []

        def produce_range(start):
            try:
                for i in range(start, start + 200):
                    bus.produce("t", rdf_payload(i), key=f"k{i % 5}")
            except Exception as exc:  # pragma: no cover
                errors.append(exc)

        threads = [threading.Thread(target=produce_range, args=(s,)) for s in (0, 200, 400)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert not errors
        records, _ = drain(bus)
        payloads = [r.payload for _, r in records]
        assert len(payloads) == 600
        assert len(set(payloads)) == 600


class TestSink:
    def fill(self, n=100, junk_at=None):
        bus = make_bus()
        for i in range(n):
            payload = b"junk payload" if i == junk_at else rdf_payload(i)
            bus.produce("t", payload)
        return bus

    def test_hundred_records_parse_back(self, tmp_path):
        bus = self.fill(100)
        target = tmp_path / "out.nt"
        result = sink_to_store(bus, "t", "g", target, batch_size=17)
        assert result.records_written == 100
        assert len(parse_ntriples(target.read_text())) == 100

    def test_crash_after_write_then_restart_no_duplicates(self, tmp_path):
        bus = self.fill(100)
        target = tmp_path / "out.nt"
        with pytest.raises(SinkCrash):
            sink_to_store(bus, "t", "g", target, batch_size=10, crash_at=(3, CRASH_AFTER_WRITE))
        result = sink_to_store(bus, "t", "g", target, batch_size=10)
        lines = target.read_text().splitlines()
        assert len(lines) == 100
        assert len(set(lines)) == 100
        assert result.records_written == 70  # 30 were committed before the crash

    def test_crash_before_write_then_restart_no_gaps(self, tmp_path):
        bus = self.fill(60)
        target = tmp_path / "out.nt"
        with pytest.raises(SinkCrash):
            sink_to_store(bus, "t", "g", target, batch_size=25, crash_at=(1, CRASH_BEFORE_WRITE))
        sink_to_store(bus, "t", "g", target, batch_size=25)
        lines = target.read_text().splitlines()
        assert len(lines) == 60
        assert len(set(lines)) == 60

    def test_empty_topic_leaves_empty_file_and_position(self, tmp_path):
        bus = make_bus()
        target = tmp_path / "out.nt"
        result = sink_to_store(bus, "t", "g", target)
        assert result.records_written == 0
        assert result.position.offsets == (0, 0, 0)
        assert not target.exists() or target.read_text() == ""

    def test_unparseable_payload_goes_to_dead_letter(self, tmp_path):
        bus = self.fill(20, junk_at=7)
        target = tmp_path / "out.nt"
        result = sink_to_store(bus, "t", "g", target)
        assert result.records_written == 19
        assert result.dead_lettered == 1
        dead = Path(str(target) + ".deadletter").read_text().splitlines()
        assert dead == ["junk payload"]
        # position advanced past the junk: nothing left to read
        again = sink_to_store(bus, "t", "g", target)
        assert again.records_written == 0

    def test_randomized_crash_schedules_exactly_once(self, tmp_path):
        for seed in range(6):
            rng = random.Random(seed)
            bus = self.fill(120)
            target = tmp_path / f"out{seed}.nt"
            crashes = 0
            while True:
                point = rng.choice([CRASH_BEFORE_WRITE, CRASH_AFTER_WRITE])
                batch = rng.randrange(0, 4)
                try:
                    if crashes < 3 and rng.random() < 0.7:
                        crashes += 1
                        sink_to_store(
                            bus, "t", "g", target, batch_size=13, crash_at=(batch, point)
                        )
                    else:
                        sink_to_store(bus, "t", "g", target, batch_size=13)
                    break
                except SinkCrash:
                    continue
            lines = target.read_text().splitlines()
            assert len(lines) == 120
            assert len(set(lines)) == 120
