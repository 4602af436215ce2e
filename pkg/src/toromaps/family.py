"""The four families of regular toroidal maps."""

from __future__ import annotations

import enum


class MapFamily(enum.Enum):
    T44S0 = "44s0"
    T44SS = "44ss"
    T36S0 = "36s0"
    T36SS = "36ss"

    @classmethod
    def parse(cls, text: str) -> "MapFamily":
        key = text.strip().lower().replace("{", "").replace("}", "")
        key = key.replace(",", "").replace("_", "").replace("(", "").replace(")", "")
        for fam in cls:
            if key in (fam.value, fam.name.lower()):
                return fam
        raise ValueError(f"unknown map family {text!r}")

    @property
    def kind(self) -> str:
        """'44' for square tessellations, '36' for triangular ones."""
        return self.value[:2]

    @property
    def diagonal(self) -> bool:
        """True for the (s,s) families."""
        return self.value.endswith("ss")

    @property
    def schlafli(self) -> tuple[int, int]:
        return (4, 4) if self.kind == "44" else (3, 6)

    @property
    def point_group_order(self) -> int:
        return 8 if self.kind == "44" else 12

    @property
    def scale(self) -> int:
        """Index of the (s,0) group inside the (s,s) group of the same kind."""
        return 2 if self.kind == "44" else 3

    def flag_count(self, s: int) -> int:
        base = {"44s0": 8, "44ss": 16, "36s0": 12, "36ss": 36}[self.value]
        return base * s * s

    @property
    def axial(self) -> "MapFamily":
        """The (s,0) family of the same kind."""
        return MapFamily.T44S0 if self.kind == "44" else MapFamily.T36S0

    @property
    def skew(self) -> "MapFamily":
        """The (s,s) family of the same kind."""
        return MapFamily.T44SS if self.kind == "44" else MapFamily.T36SS

    def label(self, s: int | None = None) -> str:
        p, q = self.schlafli
        k = "s" if s is None else str(s)
        sub = f"({k},{k})" if self.diagonal else f"({k},0)"
        return f"{{{p},{q}}}_{sub}"
