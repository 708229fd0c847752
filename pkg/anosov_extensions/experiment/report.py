from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

from ..util.serde import PathT, write_json

REPORT_SCHEMA_VERSION = 1


class Section(Enum):
    """
    Verification status of the claims of a stage.
    """

    #: Claims established with exact rational arithmetic.
    EXACT = "exact"

    #: Claims with a certified bound and a lower bound from a finite sample.
    SAMPLED = "sampled"

    #: Evidence from finite simulations, never a proof.
    STATISTICAL = "statistical"


class StageStatus(Enum):
    OK = "ok"
    FAILED = "failed"


@dataclass(frozen=True)
class StageResult:
    """
    Outcome of one pipeline stage.

    :param name:
        Stage name.
    :param section:
        Verification status of the stage's claims.
    :param status:
        Whether the stage succeeded.
    :param data:
        JSON-serializable stage data.
    :param error:
        Error message of a failed stage.
    """

    name: str
    section: Section
    status: StageStatus
    data: Dict[str, Any] = field(default_factory=dict)
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.status == StageStatus.OK

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"status": self.status.value, "data": self.data}
        if self.error is not None:
            data["error"] = self.error
        return data


@dataclass
class Report:
    """
    Result of an experiment run. Stage results are grouped by their
    verification status. Wall-clock information lives in ``metadata``,
    which is kept out of :meth:`to_dict` unless requested so that
    identical runs serialize identically.
    """

    stages: List[StageResult] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def add(self, result: StageResult):
        self.stages.append(result)

    def stage(self, name: str) -> StageResult:
        for result in self.stages:
            if result.name == name:
                return result
        raise KeyError(f"Report has no stage named {name!r}")

    def __contains__(self, name: str) -> bool:
        return any(result.name == name for result in self.stages)

    @property
    def failed(self) -> List[str]:
        return [result.name for result in self.stages if not result.ok]

    @property
    def ok(self) -> bool:
        return not self.failed

    def to_dict(self, include_metadata: bool = False) -> Dict[str, Any]:
        data: Dict[str, Any] = {"schema_version": REPORT_SCHEMA_VERSION}
        for section in Section:
            data[section.value] = {
                result.name: result.to_dict()
                for result in self.stages
                if result.section == section
            }
        if include_metadata:
            data["metadata"] = self.metadata
        return data

    def save(self, output_dir: PathT):
        """
        Write ``report.json`` and ``metadata.json`` to a directory.
        """
        output_dir = Path(output_dir)
        output_dir.mkdir(parents=True, exist_ok=True)
        write_json(output_dir / "report.json", self.to_dict())
        write_json(output_dir / "metadata.json", self.metadata)
