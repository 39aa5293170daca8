"""JSON matching-instance files.

Stable marriage::

    {"sideA": [{"label": "m1", "prefs": ["w2", "w1"]}, ...],
     "sideB": [{"label": "w1", "prefs": ["m1", "m2"]}, ...]}

Hospitals/residents::

    {"residents": [{"label": "r1", "prefs": ["h1"]}, ...],
     "hospitals": [{"label": "h1", "capacity": 2, "prefs": ["r1"]}, ...]}
"""

from __future__ import annotations

from typing import Union

from .matching import (
    HrInstance,
    InstanceError,
    PreferenceTable,
    validate_hr,
    validate_instance,
)


class UnknownLabel(InstanceError):
    pass


def _side(entries, what: str) -> tuple[list[str], list[list[str]]]:
    if not isinstance(entries, list):
        raise InstanceError(f"{what} must be a list")
    labels, prefs = [], []
    for entry in entries:
        if not isinstance(entry, dict) or "label" not in entry:
            raise InstanceError(f"every {what} entry needs a label")
        labels.append(str(entry["label"]))
        prefs.append([str(x) for x in entry.get("prefs", [])])
    if len(set(labels)) != len(labels):
        raise InstanceError(f"duplicate labels in {what}")
    return labels, prefs


def _resolve(prefs: list[list[str]], owners: list[str], targets: list[str]) -> list[list[int]]:
    index = {label: i for i, label in enumerate(targets)}
    out = []
    for owner, lst in zip(owners, prefs):
        row = []
        for label in lst:
            if label not in index:
                raise UnknownLabel(f"{owner} lists unknown agent {label!r}")
            row.append(index[label])
        out.append(row)
    return out


def load_instance(doc: dict) -> Union[PreferenceTable, HrInstance]:
    if not isinstance(doc, dict):
        raise InstanceError("instance document must be a JSON object")
    if "sideA" in doc or "sideB" in doc:
        labels_a, prefs_a = _side(doc.get("sideA", []), "sideA")
        labels_b, prefs_b = _side(doc.get("sideB", []), "sideB")
        table = PreferenceTable(
            len(labels_a),
            len(labels_b),
            _resolve(prefs_a, labels_a, labels_b),
            _resolve(prefs_b, labels_b, labels_a),
            tuple(labels_a),
            tuple(labels_b),
        )
        return validate_instance(table)
    if "residents" in doc or "hospitals" in doc:
        labels_r, prefs_r = _side(doc.get("residents", []), "residents")
        labels_h, prefs_h = _side(doc.get("hospitals", []), "hospitals")
        caps = []
        for entry in doc.get("hospitals", []):
            cap = entry.get("capacity", 1)
            if not isinstance(cap, int) or isinstance(cap, bool):
                raise InstanceError(f"capacity of {entry['label']} must be an integer")
            caps.append(cap)
        inst = HrInstance(
            _resolve(prefs_r, labels_r, labels_h),
            _resolve(prefs_h, labels_h, labels_r),
            caps,
            tuple(labels_r),
            tuple(labels_h),
        )
        return validate_hr(inst)
    raise InstanceError("expected sideA/sideB or residents/hospitals keys")


def dump_instance(obj: Union[PreferenceTable, HrInstance]) -> dict:
    if isinstance(obj, PreferenceTable):
        return {
            "sideA": [
                {"label": obj.labels_a[a], "prefs": [obj.labels_b[b] for b in lst]}
                for a, lst in enumerate(obj.prefs_a)
            ],
            "sideB": [
                {"label": obj.labels_b[b], "prefs": [obj.labels_a[a] for a in lst]}
                for b, lst in enumerate(obj.prefs_b)
            ],
        }
    return {
        "residents": [
            {"label": obj.resident_labels[r], "prefs": [obj.hospital_labels[h] for h in lst]}
            for r, lst in enumerate(obj.resident_prefs)
        ],
        "hospitals": [
            {
                "label": obj.hospital_labels[h],
                "capacity": obj.capacities[h],
                "prefs": [obj.resident_labels[r] for r in lst],
            }
            for h, lst in enumerate(obj.hospital_prefs)
        ],
    }
