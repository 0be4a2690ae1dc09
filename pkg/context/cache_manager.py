"""
Project: Turán Workbench - exact simplicial Turán computations at desk scale
File: context/cache_manager.py
Description:
    Long-term memory of the workbench: exact search results persisted as JSON lines.

    Key Capabilities:
    1. Persistence: every exact result is appended to the cache file immediately,
       so an interrupted batch keeps what it already computed.
    2. Lookup by canonical instance key (the latest record wins).
    3. Trust boundary: records are only handed out through a verifier callback;
       a record failing verification is reported and skipped, never reused.
"""

import json
import logging
import os
from dataclasses import asdict, dataclass, field
from typing import Callable

logger = logging.getLogger("CacheManager")


@dataclass
class CacheRecord:
    instance_key: str
    command: str
    parameters: dict
    optimum: int
    witness: str
    nodes: int
    seconds: float
    tool_version: str
    extra: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "CacheRecord":
        return cls(
            instance_key=str(data["instance_key"]),
            command=str(data["command"]),
            parameters=dict(data.get("parameters", {})),
            optimum=int(data["optimum"]),
            witness=str(data["witness"]),
            nodes=int(data.get("nodes", 0)),
            seconds=float(data.get("seconds", 0.0)),
            tool_version=str(data.get("tool_version", "")),
            extra=dict(data.get("extra", {})),
        )


class CacheManager:
    """
    Append-only JSON-lines store of exact results.

    Args:
        cache_file: Path of the JSON-lines file (directories are created on demand).
        enabled: When False, lookups miss and stores are dropped.
    """

    def __init__(self, cache_file, enabled=True):
        self.cache_file = cache_file
        self.enabled = bool(enabled)
        self.records: dict[str, CacheRecord] = self._load_from_disk() if self.enabled else {}

    def _load_from_disk(self) -> dict[str, CacheRecord]:
        """
        [Persistence Layer]
        Reads every well-formed line; malformed lines are skipped with a warning.
        """
        records: dict[str, CacheRecord] = {}
        if not os.path.exists(self.cache_file):
            return records
        with open(self.cache_file, "r", encoding="utf-8") as f:
            for number, line in enumerate(f, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = CacheRecord.from_dict(json.loads(line))
                except (ValueError, KeyError, TypeError) as e:
                    logger.warning(f"Skipping malformed cache line {number}: {e}")
                    continue
                records[record.instance_key] = record
        logger.info(f"Cache loaded: {len(records)} instances from {self.cache_file}")
        return records

    def lookup(self, instance_key: str, verify: Callable[[CacheRecord], bool]) -> CacheRecord | None:
        """
        [Trust Boundary]
        Returns the cached record only if `verify` accepts it.
        """
        if not self.enabled:
            return None
        record = self.records.get(instance_key)
        if record is None:
            logger.info(f"Cache miss for {instance_key[:12]}")
            return None
        if not verify(record):
            logger.warning(f"Cache record {instance_key[:12]} failed re-verification; ignoring it")
            return None
        logger.info(f"Cache hit for {instance_key[:12]} (optimum {record.optimum})")
        return record

    def store(self, record: CacheRecord) -> None:
        """
        [State Mutation]
        Appends one record and flushes it to disk right away.
        """
        if not self.enabled:
            return
        directory = os.path.dirname(self.cache_file)
        if directory:
            os.makedirs(directory, exist_ok=True)
        try:
            with open(self.cache_file, "a", encoding="utf-8") as f:
                f.write(record.to_json() + "\n")
        except OSError as e:
            logger.error(f"Failed to append to cache: {e}")
            return
        self.records[record.instance_key] = record
