"""Sequential failure and repair simulation.

Multi-node failure is modeled as a sequence of single failures, each
repaired before the next one strikes. At every step one node is erased,
a repair plan is searched against the survivors' current contents, the
node is restored with the packets the plan regenerates (recomputed
through field arithmetic, not copied), and an any-k reconstruction check
runs on the result. Failures and surviving-set choices come from an
explicit schedule or from a seeded generator, so traces replay exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .construct import Code
from .errors import ValidationError
from .model import DssSpec
from .verify import (RepairPlan, _require_integer_beta, execute_plan,
                     find_repair_plan, verify_reconstruction,
                     verify_repairability)


@dataclass(frozen=True)
class SimEvent:
    step: int
    failed: int
    set_index: int
    plan: RepairPlan | None
    downloads: int
    restored_exact: bool
    reconstruction_ok: bool

    def to_json(self) -> dict:
        return {
            "step": self.step,
            "failed": self.failed,
            "set_index": self.set_index,
            "plan": self.plan.to_json() if self.plan else None,
            "downloads": self.downloads,
            "restored_exact": self.restored_exact,
            "reconstruction_ok": self.reconstruction_ok,
        }


@dataclass(frozen=True)
class SimTrace:
    seed: int | None
    schedule: tuple[tuple[int, int], ...] | None
    steps: int
    events: tuple[SimEvent, ...]
    cumulative_downloads: tuple[tuple[int, int], ...]  # (node id, packets)
    failure: str | None

    @property
    def ok(self) -> bool:
        return self.failure is None

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "seed": self.seed,
            "schedule": [list(s) for s in self.schedule] if self.schedule is not None else None,
            "steps": self.steps,
            "events": [e.to_json() for e in self.events],
            "cumulative_downloads": {str(i): c for i, c in self.cumulative_downloads},
            "failure": self.failure,
        }


def run_simulation(code: Code, spec: DssSpec, seed: int | None = None,
                   steps: int = 0, schedule=None, precheck: bool = True) -> SimTrace:
    """Drive ``steps`` failure/repair rounds and record everything.

    ``schedule`` is an explicit list of (node id, set index) pairs; when
    absent, each step draws the node uniformly, then one of its surviving
    sets uniformly, from random.Random(seed). A missing plan mid-trace is
    recorded as a trace failure, not raised.
    """
    beta = _require_integer_beta(spec.beta)
    if schedule is not None:
        schedule = [(int(i), int(l)) for i, l in schedule]
        for i, l in schedule:
            if not 1 <= i <= spec.n:
                raise ValidationError(f"schedule references node {i}, valid ids are 1..{spec.n}")
            if not 1 <= l <= spec.tau(i):
                raise ValidationError(
                    f"schedule references set index {l} for node {i}, valid are 1..{spec.tau(i)}"
                )
        steps = len(schedule)
    elif seed is None and steps > 0:
        raise ValidationError("seeded simulation needs a seed when no schedule is given")

    if precheck and steps > 0 and not verify_repairability(code, spec).passed:
        raise ValidationError("initial code fails repairability; simulation refused "
                              "(pass precheck=False to record the failure instead)")

    rng = random.Random(seed)
    state: list[tuple] = [tuple(p) for p in code.nodes]
    events: list[SimEvent] = []
    cumulative = {i: 0 for i in range(1, spec.n + 1)}
    failure = None

    for step in range(1, steps + 1):
        if schedule is not None:
            node, set_index = schedule[step - 1]
        else:
            node = rng.randrange(spec.n) + 1
            set_index = rng.randrange(spec.tau(node)) + 1
        original = state[node - 1]
        state[node - 1] = ()
        working = Code(field=code.field, B=code.B,
                       nodes=tuple(state[:node - 1]) + (original,) + tuple(state[node:]),
                       seed=code.seed)
        # plan search sees the survivors' current contents; the failed
        # node's slot is only consulted for its lost packets
        plan = find_repair_plan(working, spec, node, set_index, beta)
        if plan is None:
            state[node - 1] = original
            failure = f"step {step}: no repair plan for node {node} via set {set_index}"
            events.append(SimEvent(step=step, failed=node, set_index=set_index,
                                   plan=None, downloads=0, restored_exact=False,
                                   reconstruction_ok=False))
            break
        regenerated = execute_plan(plan, working)
        state[node - 1] = tuple(regenerated)
        restored_exact = state[node - 1] == original
        downloads = plan.download_count()
        cumulative[node] += downloads
        current = Code(field=code.field, B=code.B, nodes=tuple(state), seed=code.seed)
        recon = verify_reconstruction(current, spec.k)
        events.append(SimEvent(step=step, failed=node, set_index=set_index,
                               plan=plan, downloads=downloads,
                               restored_exact=restored_exact,
                               reconstruction_ok=recon.passed))
        if not restored_exact or not recon.passed:
            failure = f"step {step}: repair of node {node} left the system unhealthy"
            break

    return SimTrace(seed=seed, schedule=tuple(schedule) if schedule is not None else None,
                    steps=steps, events=tuple(events),
                    cumulative_downloads=tuple(sorted(cumulative.items())),
                    failure=failure)
