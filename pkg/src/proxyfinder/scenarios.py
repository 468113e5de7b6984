"""Synthetic proxy scenarios modelled on well-known mobile-platform API groups.

These reproduce the *structure* of each proxy relationship on small
tabular distributions; the numbers are illustrative, not measured.

display_size
    A view in a maximized window reports the display's width and height.
    In a normal window the view is one size class smaller, so the reported
    dimensions only pin down the display once the window flags are known.
location
    Sixteen location cells (4 bits). Each radio or network signal, when
    present, reveals two overlapping bits of the cell; ``coverage`` sets how
    often each signal is present.
user_id
    Sixteen equally likely users, each with a distinct device fingerprint
    built from skewed attribute values, so single attributes are shared by
    many users while the combination identifies one.
"""

from __future__ import annotations

import inspect
import itertools
from collections.abc import Mapping
from typing import Optional

import numpy as np

from .exceptions import CatalogError, ValidationError
from .instance import ProxyInstance
from .model import AttributeSchema, FunctionDef, TabularDistribution

SCENARIO_MAX_STATES = 2**16


# display-size --------------------------------------------------------------

DISPLAYS = {
    "720x1280": ("720", "1280"),
    "720x1600": ("720", "1600"),
    "1080x1600": ("1080", "1600"),
    "1080x2400": ("1080", "2400"),
}
WINDOWED_WIDTH = {"720": "600", "1080": "720"}
WINDOWED_HEIGHT = {"1280": "1080", "1600": "1280", "2400": "1920"}


def _display_size(maximized_rate=0.5, display_weights=(0.4, 0.3, 0.2, 0.1), include_direct=True, alpha=0.0, seed=0):
    if not 0.0 <= maximized_rate <= 1.0:
        raise ValidationError("maximized_rate must lie in [0, 1]")
    weights = np.asarray(display_weights, dtype=float)
    if weights.shape != (len(DISPLAYS),) or np.any(weights < 0) or weights.sum() <= 0:
        raise ValidationError(f"display_weights needs {len(DISPLAYS)} non-negative weights")
    weights = weights / weights.sum()
    widths = sorted({w for w, _ in DISPLAYS.values()} | set(WINDOWED_WIDTH.values()), key=int)
    heights = sorted({h for _, h in DISPLAYS.values()} | set(WINDOWED_HEIGHT.values()), key=int)
    schema = AttributeSchema.from_pairs(
        [
            ("display_size", list(DISPLAYS)),
            ("window_flags", ["maximized", "normal"]),
            ("view_width", widths),
            ("view_height", heights),
        ]
    )
    entries = []
    for (label, (w, h)), pd in zip(DISPLAYS.items(), weights):
        entries.append(((label, "maximized", w, h), pd * maximized_rate))
        entries.append(((label, "normal", WINDOWED_WIDTH[w], WINDOWED_HEIGHT[h]), pd * (1 - maximized_rate)))
    dist = TabularDistribution(schema, entries, max_states=SCENARIO_MAX_STATES)

    functions = []
    if include_direct:
        functions.append(FunctionDef.projection("Display.getMetrics", "display_size", schema))
    functions += [
        # obtaining the window and attaching content are needed steps that carry no information
        FunctionDef.table("Activity.getWindow", ["window_flags"], ["window"], {("maximized",): "window", ("normal",): "window"}),
        FunctionDef.projection("Window.setFlags", "window_flags", schema),
        FunctionDef.table("Window.setContentView", ["window_flags"], ["attached"], {("maximized",): "attached", ("normal",): "attached"}),
        FunctionDef.projection("View.getWidth", "view_width", schema),
        FunctionDef.projection("View.getHeight", "view_height", schema),
    ]
    return ProxyInstance(schema, dist, tuple(functions), "display_size", alpha, name="display_size")


# location -------------------------------------------------------------------

N_CELLS = 16
SIGNALS = {
    # name: (attribute, revealed bits of the cell index, API)
    "wifi": ("wifi_list", (0, 1), "WifiManager.getScanResults"),
    "cell": ("cell_list", (1, 2), "TelephonyManager.getAllCellInfo"),
    "bt": ("bt_list", (2, 3), "BluetoothAdapter.startDiscovery"),
    "ip": ("ip_list", (3, 0), "NetworkInterface.getInterfaceAddresses"),
}
DEFAULT_COVERAGE = {"wifi": 0.9, "cell": 0.8, "bt": 0.6, "ip": 0.0}


def _signal_value(cell: int, bits: tuple[int, int]) -> str:
    return "".join(str((cell >> b) & 1) for b in bits)


def _location(coverage: Optional[Mapping[str, float]] = None, include_direct=True, alpha=0.0, seed=0):
    cov = dict(DEFAULT_COVERAGE)
    if coverage:
        unknown = set(coverage) - set(SIGNALS)
        if unknown:
            raise ValidationError(f"unknown signals {sorted(unknown)}; known: {sorted(SIGNALS)}")
        cov.update(coverage)
    for k, c in cov.items():
        if not 0.0 <= c <= 1.0:
            raise ValidationError(f"coverage of {k!r} must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    prior = rng.random(N_CELLS) + 0.5
    prior = prior / prior.sum()

    sig_domain = ["none", "00", "01", "10", "11"]
    cells = [f"cell{i:02d}" for i in range(N_CELLS)]
    schema = AttributeSchema.from_pairs(
        [("location", cells)] + [(attr, sig_domain) for attr, _, _ in SIGNALS.values()]
    )
    entries = {}
    for cell in range(N_CELLS):
        options = []
        for key, (_, bits, _) in SIGNALS.items():
            c = cov[key]
            opts = []
            if c > 0:
                opts.append((_signal_value(cell, bits), c))
            if c < 1:
                opts.append(("none", 1 - c))
            options.append(opts)
        for combo in itertools.product(*options):
            p = prior[cell]
            for _, q in combo:
                p *= q
            entries[(cells[cell],) + tuple(v for v, _ in combo)] = p
    dist = TabularDistribution(schema, entries.items(), max_states=SCENARIO_MAX_STATES)

    functions = []
    if include_direct:
        functions.append(FunctionDef.projection("LocationManager.getCurrentLocation", "location", schema))
    for attr, _, api in SIGNALS.values():
        functions.append(FunctionDef.projection(api, attr, schema))
    return ProxyInstance(schema, dist, tuple(functions), "location", alpha, name="location")


# user-id --------------------------------------------------------------------

FINGERPRINT = {
    # attribute: (values, skewed weights)
    "locale": (["en_US", "es_US", "de_DE"], [0.6, 0.25, 0.15]),
    "carrier": (["CarrierA", "CarrierB", "CarrierC"], [0.55, 0.3, 0.15]),
    "timezone": (["America/New_York", "America/Chicago", "Europe/Berlin"], [0.5, 0.35, 0.15]),
    "disk_space": (["64GB", "128GB", "256GB"], [0.3, 0.5, 0.2]),
    "model": (["iPhone", "iPhone Pro", "iPad"], [0.6, 0.3, 0.1]),
    "os_version": (["16.7", "17.5", "18.1"], [0.2, 0.3, 0.5]),
}
COUNTRY = {"en_US": "US", "es_US": "US", "de_DE": "DE"}
ARCH = {"iPhone": "arm64e", "iPhone Pro": "arm64e", "iPad": "arm64"}
USER_ID_APIS = [
    ("FileManager.attributesOfFileSystem", "disk_space"),
    ("CTCarrier.carrierName", "carrier"),
    ("NSLocale.currentLocale.localeIdentifier", "locale"),
    ("TimeZone.current", "timezone"),
    ("UIDevice.localizedModel", "model"),
    ("UIDevice.systemVersion", "os_version"),
]


def _user_id(n_users=16, include_direct=False, alpha=None, seed=0, max_tries=1000):
    n_values = np.prod([len(v) for v, _ in FINGERPRINT.values()])
    if not 2 <= n_users <= n_values:
        raise ValidationError(f"n_users must lie in [2, {n_values}]")
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        prints = [
            tuple(vals[int(rng.choice(len(vals), p=w))] for vals, w in FINGERPRINT.values()) for _ in range(n_users)
        ]
        if len(set(prints)) == n_users:
            break
    else:
        raise ValidationError(f"could not draw {n_users} distinct fingerprints in {max_tries} tries")
    users = [f"user{i:02d}" for i in range(n_users)]
    schema = AttributeSchema.from_pairs([("user_id", users)] + [(k, vals) for k, (vals, _) in FINGERPRINT.items()])
    entries = [((u,) + fp, 1.0 / n_users) for u, fp in zip(users, prints)]
    dist = TabularDistribution(schema, entries, max_states=SCENARIO_MAX_STATES)

    functions = []
    if include_direct:
        functions.append(FunctionDef.projection("ASIdentifierManager.advertisingIdentifier", "user_id", schema))
    functions += [FunctionDef.projection(api, attr, schema) for api, attr in USER_ID_APIS]
    functions += [
        FunctionDef.table(
            "NSLocale.currentLocale.countryCode", ["locale"], sorted(set(COUNTRY.values())), {(k,): v for k, v in COUNTRY.items()}
        ),
        FunctionDef.table(
            "NXGetLocalArchInfo.description", ["model"], sorted(set(ARCH.values())), {(k,): v for k, v in ARCH.items()}
        ),
    ]
    if alpha is None:
        # half of H(user_id) for equally likely users
        alpha = 0.5 * float(np.log2(n_users))
    return ProxyInstance(schema, dist, tuple(functions), "user_id", alpha, name="user_id")


CATALOG = {
    "display_size": _display_size,
    "location": _location,
    "user_id": _user_id,
}


def scenario_names() -> list[str]:
    return sorted(CATALOG)


def build_scenario(name: str, seed: int = 0, **params) -> ProxyInstance:
    """Build a catalog scenario.

    Common keyword parameters are ``alpha`` and ``include_direct`` (whether
    the direct accessor API is among the functions). Scenario-specific ones:
    ``maximized_rate``/``display_weights`` (display_size), ``coverage``
    (location), ``n_users`` (user_id).
    """
    try:
        builder = CATALOG[name]
    except KeyError:
        raise CatalogError(f"unknown scenario {name!r}; choose from {scenario_names()}") from None
    try:
        inspect.signature(builder).bind(seed=seed, **params)
    except TypeError as exc:
        raise ValidationError(f"bad parameters for scenario {name!r}: {exc}") from None
    return builder(seed=seed, **params)
