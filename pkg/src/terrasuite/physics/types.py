"""Core dynamic types for the planar rigid-body stepper."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

WORLD = -1  # joint parent id meaning "pinned to the static world"


def box_inertia(mass: float, hx: float, hy: float) -> float:
    """Moment of inertia of a solid box about its center, planar rotation."""
    return mass * (hx * hx + hy * hy) / 3.0


def box_contact_points(hx: float, hy: float) -> list[tuple[float, float]]:
    """Corners plus edge midpoints of the collision box, body frame."""
    return [
        (-hx, -hy), (hx, -hy), (hx, hy), (-hx, hy),
        (0.0, -hy), (hx, 0.0), (0.0, hy), (-hx, 0.0),
    ]


@dataclass(eq=False)
class LinkBody:
    id: int
    mass: float
    inertia: float
    half_extents: tuple[float, float]
    contact_points: list[tuple[float, float]] = field(default_factory=list)
    name: str = ""

    def __post_init__(self):
        if self.mass <= 0:
            raise ValueError(f"link {self.name or self.id}: mass must be > 0")
        if self.inertia <= 0:
            raise ValueError(f"link {self.name or self.id}: inertia must be > 0")
        hx, hy = self.half_extents
        if hx <= 0 or hy <= 0:
            raise ValueError(f"link {self.name or self.id}: half_extents must be > 0")
        if not self.contact_points:
            self.contact_points = box_contact_points(hx, hy)
        for px, py in self.contact_points:
            if abs(px) > hx * (1 + 1e-9) or abs(py) > hy * (1 + 1e-9):
                raise ValueError(
                    f"link {self.name or self.id}: contact point ({px}, {py}) outside box"
                )


@dataclass(eq=False)
class RevoluteJoint:
    parent_link: int  # WORLD pins to the static world (anchor in world frame)
    child_link: int
    anchor_parent: tuple[float, float]
    anchor_child: tuple[float, float]
    angle_limits: tuple[float, float]
    torque_limit: float
    kp: float = 0.0
    kd: float = 0.0
    name: str = ""

    def __post_init__(self):
        lo, hi = self.angle_limits
        if lo > hi:
            raise ValueError(f"joint {self.name}: angle_limits inverted ({lo} > {hi})")
        if self.torque_limit <= 0:
            raise ValueError(f"joint {self.name}: torque_limit must be > 0")
        if self.kp < 0 or self.kd < 0:
            raise ValueError(f"joint {self.name}: gains must be >= 0")


@dataclass
class SimState:
    """Maximal-coordinate state: one row per link, all world frame."""

    pos: np.ndarray      # (n, 2) center of mass
    ang: np.ndarray      # (n,)
    vel: np.ndarray      # (n, 2)
    omega: np.ndarray    # (n,)
    time: float = 0.0
    diverged: bool = False

    @classmethod
    def zeros(cls, n_links: int) -> "SimState":
        return cls(
            pos=np.zeros((n_links, 2)),
            ang=np.zeros(n_links),
            vel=np.zeros((n_links, 2)),
            omega=np.zeros(n_links),
        )

    @property
    def n_links(self) -> int:
        return self.pos.shape[0]

    def copy(self) -> "SimState":
        return SimState(self.pos.copy(), self.ang.copy(), self.vel.copy(),
                        self.omega.copy(), self.time, self.diverged)

    def is_finite(self) -> bool:
        return bool(
            np.isfinite(self.pos).all()
            and np.isfinite(self.ang).all()
            and np.isfinite(self.vel).all()
            and np.isfinite(self.omega).all()
        )


@dataclass(frozen=True)
class ContactEvent:
    link: int
    point: tuple[float, float]
    normal_impulse: float
    tangent_impulse: float
