"""Deterministic synthetic interaction streams for testing and demos.

Three behavioural profiles: a normal user types around two characters
per second with long pauses, a distressed one around five with double
clicks, a bot around fifteen with machine-tight spacing. Same profile and
seed always produce byte-identical output.
"""

from __future__ import annotations

import random
import string
from dataclasses import dataclass

from .model import Event
from .parser import format_event

RAW_EPOCH = 5_000  # arbitrary session clock base


@dataclass(frozen=True)
class Profile:
    name: str
    mean_chars_per_sec: float
    pause_ms_range: tuple[int, int]
    button_burst_prob: float
    burst_len_range: tuple[int, int]
    close_delay_range: tuple[int, int]
    seed: int = 0


PROFILES = {
    "normal": Profile("normal", 2.0, (800, 2500), 0.0, (3, 8), (300, 900)),
    "distressed": Profile("distressed", 5.0, (300, 1200), 0.3, (6, 12), (100, 400)),
    "bot": Profile("bot", 15.0, (50, 200), 0.0, (8, 16), (60, 150)),
}


def simulate(profile: Profile, duration_ms: int, seed: int | None = None) -> list[str]:
    """Generate canonical iCode lines covering roughly duration_ms.

    Cycles of one typing burst closed by a button press, until the time
    budget runs out; the final burst is closed by the exit button instead.
    """
    if duration_ms <= 0:
        raise ValueError("duration_ms must be positive")
    rng = random.Random(profile.seed if seed is None else seed)
    base_interval = 1000.0 / profile.mean_chars_per_sec

    t = RAW_EPOCH
    start = t
    events = [Event.entry_focus("focusin", t)]
    t += rng.randint(200, 600)
    if profile.name != "bot":
        events.append(Event.scale(20 + 10 * rng.randint(0, 5), t))
        t += rng.randint(400, 1200)

    index = 0
    while True:
        burst_len = rng.randint(*profile.burst_len_range)
        for j in range(burst_len):
            ch = rng.choice(string.ascii_lowercase)
            events.append(Event.entry_insert("key", ch, index, t))
            index += 1
            if j < burst_len - 1:
                t += max(1, round(base_interval * rng.uniform(0.85, 1.25)))
        t += rng.randint(*profile.close_delay_range)
        if t - start >= duration_ms:
            events.append(Event.button_exit(t))
            break
        events.append(Event.button_pressed(t))
        if rng.random() < profile.button_burst_prob:
            t += rng.randint(120, 350)
            events.append(Event.button_pressed(t))
        t += rng.randint(*profile.pause_ms_range)

    return [format_event(e) for e in events]
