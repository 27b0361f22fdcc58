"""Run configuration files.

Plain-text format with bracketed section headers and ``key = value``
lines (INI grammar, long values may continue on indented lines).
Matrices are written in the shared text format "rows cols" followed by
row-major "re+imi" entries, e.g. ``2 2 1+0i 0+0i 0+0i 1-0i``.

Sections
--------
[model]          type = builtin name or {lindblad, microscopic,
                 collisional, stochastic}; remaining keys are the model
                 parameters (numbered keys jump_1.., kraus_1.. for
                 operator lists).
[initial_state]  kind = optimal | maximally-mixed | pure | matrix;
                 pure takes theta/phi, matrix takes matrix = <text>.
[times]          t_max, steps (grid linspace(0, t_max, steps)).
[run]            seed, output, mode (series | monte-carlo), n_paths.
[sweep]          param, values (whitespace or comma separated).
"""

import configparser

import numpy as np

from . import dynamics, microscopic, models, qcore, quantumness, stochastic
from .qcore import QuantumState


class ConfigError(Exception):
    """Anything wrong with the configuration text itself."""


BUILTIN_TYPES = tuple(models.BUILTIN_PARAMS)
BLOCK_TYPES = ("lindblad", "microscopic", "collisional", "stochastic")


class RunConfig:
    def __init__(self, model_type, model_params, initial_state, t_max, steps,
                 seed=None, output=None, mode="series", n_paths=None,
                 sweep_param=None, sweep_values=None):
        self.model_type = model_type
        self.model_params = model_params
        self.initial_state = initial_state
        self.t_max = t_max
        self.steps = steps
        self.seed = seed
        self.output = output
        self.mode = mode
        self.n_paths = n_paths
        self.sweep_param = sweep_param
        self.sweep_values = sweep_values

    def times(self):
        return np.linspace(0.0, self.t_max, self.steps)

    def needs_seed(self):
        return self.model_type == "stochastic" or (
            self.model_type == "collisional" and self.mode == "monte-carlo"
        )


def _numbered_values(section, prefix):
    out = []
    k = 1
    while f"{prefix}_{k}" in section:
        out.append(qcore.parse_matrix_text(section[f"{prefix}_{k}"]))
        k += 1
    return out


def load_config(path):
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        read = parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    if not read:
        raise ConfigError(f"cannot read config file {path}")
    if "model" not in parser:
        raise ConfigError("config needs exactly one [model] section")
    model = dict(parser["model"])
    if "type" not in model:
        raise ConfigError("[model] needs a type")
    mtype = model.pop("type").strip()
    if mtype not in BUILTIN_TYPES + BLOCK_TYPES:
        raise ConfigError(f"unknown model type {mtype!r}")

    init = dict(parser["initial_state"]) if "initial_state" in parser else {"kind": "optimal"}

    times_sec = parser["times"] if "times" in parser else {}
    try:
        t_max = float(times_sec.get("t_max", 10.0))
        steps = int(times_sec.get("steps", 101))
    except ValueError as exc:
        raise ConfigError(f"bad [times] values: {exc}") from exc
    if t_max <= 0 or steps < 2:
        raise ConfigError("[times] needs t_max > 0 and steps >= 2")

    run = parser["run"] if "run" in parser else {}
    seed = run.get("seed")
    seed = int(seed) if seed is not None else None
    mode = run.get("mode", "series")
    if mode not in ("series", "monte-carlo"):
        raise ConfigError(f"unknown mode {mode!r}")
    n_paths = run.get("n_paths")
    n_paths = int(n_paths) if n_paths is not None else None

    sweep_param = sweep_values = None
    if "sweep" in parser:
        sweep = parser["sweep"]
        sweep_param = sweep.get("param")
        if sweep_param is None:
            raise ConfigError("[sweep] needs a param")
        raw = sweep.get("values", "")
        tokens = raw.replace(",", " ").split()
        try:
            sweep_values = [float(tok) for tok in tokens]
        except ValueError as exc:
            raise ConfigError(f"bad sweep values: {exc}") from exc

    cfg = RunConfig(mtype, model, init, t_max, steps, seed=seed,
                    output=run.get("output"), mode=mode, n_paths=n_paths,
                    sweep_param=sweep_param, sweep_values=sweep_values)
    if cfg.needs_seed() and cfg.seed is None:
        raise ConfigError("stochastic runs need a seed in [run] or --seed")
    return cfg


def _float_params(mapping, context):
    out = {}
    for key, value in mapping.items():
        try:
            out[key] = float(value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {context} parameter {key!r}: {value!r}") from exc
    return out


def build_model(cfg):
    """Instantiate the configured model object.

    Returns a pair (kind, object): builtin parameter sets keep their
    registry name as kind; explicit blocks return the constructed
    LindbladModel / JointModel / CollisionalModel / NoiseProcess spec.
    """
    mtype = cfg.model_type
    section = cfg.model_params
    try:
        if mtype in BUILTIN_TYPES:
            return mtype, models.builtin_params(mtype, _float_params(section, mtype))
        if mtype == "lindblad":
            h_bar = qcore.parse_matrix_text(section["h_bar"])
            jumps = _numbered_values(section, "jump")
            rates = qcore.parse_matrix_text(section["rates"]) if "rates" in section else None
            if rates is not None and 1 in rates.shape:
                rates = rates.reshape(-1).real
            return mtype, dynamics.LindbladModel(h_bar, jumps, rates=rates)
        if mtype == "microscopic":
            return mtype, microscopic.JointModel(
                qcore.parse_matrix_text(section["h_s"]),
                qcore.parse_matrix_text(section["h_e"]),
                qcore.parse_matrix_text(section["h_i"]),
                QuantumState(qcore.parse_matrix_text(section["sigma0"])),
            )
        if mtype == "collisional":
            waiting = stochastic.WaitingTime(
                section["waiting_family"].strip(),
                rate=float(section["waiting_rate"]) if "waiting_rate" in section else None,
                shape=float(section["waiting_shape"]) if "waiting_shape" in section else None,
                period=float(section["waiting_period"]) if "waiting_period" in section else None,
            )
            return mtype, stochastic.CollisionalModel(
                qcore.parse_matrix_text(section["free_hamiltonian"]),
                _numbered_values(section, "kraus"),
                waiting,
            )
        if mtype == "stochastic":
            process = stochastic.NoiseProcess(
                section["family"].strip(),
                float(section["amplitude"]),
                float(section.get("correlation_time", 0.0)),
                qcore.parse_matrix_text(section["coupling"]),
            )
            base_h = qcore.parse_matrix_text(section["base_h"])
            return mtype, (process, base_h)
    except KeyError as exc:
        raise ConfigError(f"missing {mtype} key {exc.args[0]!r}") from exc
    raise ConfigError(f"unknown model type {mtype!r}")


def system_dimension(kind, obj):
    if kind in BUILTIN_TYPES:
        if kind == "oscillator":
            return obj.dim
        return {"thermal-tls": 2, "nonmarkov-decay": 2, "fluorescence": 2, "two-qubit": 4}[kind]
    if kind == "lindblad":
        return obj.dim
    if kind == "microscopic":
        return obj.dim_s
    if kind == "collisional":
        return obj.dim
    process, base_h = obj
    return base_h.shape[0]


def lindblad_for(kind, obj):
    """Lindblad generator backing a model, when one exists."""
    if kind in ("thermal-tls", "fluorescence", "two-qubit", "oscillator"):
        return obj.lindblad_model()
    if kind == "lindblad":
        return obj
    return None


def resolve_initial_state(cfg, kind, obj):
    """Initial system state from the [initial_state] section.

    ``optimal`` resolves to the top eigenprojector of the stationary
    state itself, which is the initial condition whose propagated
    series attains 1 + D_Q (the reported optimal state is its complex
    conjugate).
    """
    spec = cfg.initial_state
    kind_key = spec.get("kind", "optimal").strip()
    dim = system_dimension(kind, obj)
    if kind_key == "maximally-mixed":
        return QuantumState.maximally_mixed(dim)
    if kind_key == "pure":
        if dim != 2:
            raise ConfigError("pure(theta, phi) initial states are for qubits")
        theta = float(spec.get("theta", 0.0))
        phi = float(spec.get("phi", 0.0))
        return QuantumState.pure(qcore.bloch_vector_state(theta, phi))
    if kind_key == "matrix":
        if "matrix" not in spec:
            raise ConfigError("initial_state kind=matrix needs a matrix entry")
        state = QuantumState(qcore.parse_matrix_text(spec["matrix"]))
        if state.dim != dim:
            raise ConfigError(f"initial state dimension {state.dim} != system dimension {dim}")
        return state
    if kind_key == "optimal":
        if kind == "nonmarkov-decay":
            return QuantumState.pure(qcore.ket(2, 0))
        if kind == "oscillator":
            # thermal stationary ladder: the top eigenprojector is the
            # ground state, and it is real so time reversal is moot
            return QuantumState.pure(qcore.ket(dim, 0))
        model = lindblad_for(kind, obj)
        if model is None:
            raise ConfigError(f"optimal initial state is not defined for {kind} blocks")
        report = quantumness.degree_of_quantumness(model)
        return dynamics.time_reversed_state(report.optimal_state)
    raise ConfigError(f"unknown initial_state kind {kind_key!r}")
