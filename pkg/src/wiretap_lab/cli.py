"""``wiretap-lab`` command line interface.

Exit status: 0 on success, 2 on a domain/validation error or bad usage,
1 on an internal error.
"""
import argparse
import contextlib
import csv
import io
import json
import math
import sys
import warnings
from dataclasses import asdict, is_dataclass

import numpy as np

from . import bounds, channels, games, holevo, info, polar, protosim, qstate, rates, secrecy, verify
from .codes import build_code
from .errors import WiretapLabError

SIG_DIGITS = 12

# (command path) -> description, filled in by build_parser.
REGISTRY = {}

# (command path) -> module operations it reaches. Each operation appears once.
OPERATIONS = {
    "entropy binary": ("info.binary_entropy",),
    "entropy shannon": ("info.shannon_entropy",),
    "entropy mi": ("info.mutual_information",),
    "entropy conditional": ("info.conditional_entropy",),
    "entropy von-neumann": ("qstate.von_neumann_entropy",),
    "cascade": ("info.cascade",),
    "secrecy cs": ("secrecy.cs",),
    "secrecy cs-bar": ("secrecy.cs_bar_bsc",),
    "secrecy upper": ("secrecy.cs_bar_upper",),
    "secrecy lower": ("secrecy.thm4_lower",),
    "secrecy cmi": ("channels.conditional_mi_given_z",),
    "secrecy compose": ("channels.compose",),
    "secrecy forward": ("channels.forward_conceptual",),
    "rates overlap": ("rates.overlap",),
    "rates prune": ("rates.prune",),
    "rates branch": ("rates.rate_branch",),
    "rates select": ("rates.select_branch",),
    "rates adaptive": ("rates.adaptive_rates",),
    "holevo chi": ("holevo.holevo_chi",),
    "holevo rate": ("holevo.secrecy_rate",),
    "holevo optimize": ("holevo.optimize_secrecy_rate",),
    "holevo trace-distance": ("qstate.trace_distance",),
    "holevo fidelity": ("qstate.fidelity",),
    "holevo relative-entropy": ("qstate.relative_entropy",),
    "holevo apply": ("qstate.apply_channel",),
    "holevo dpi": ("qstate.check_dpi",),
    "holevo contractivity": ("qstate.check_contractivity",),
    "holevo tensor": ("qstate.tensor",),
    "bounds fano": ("bounds.fano_min_error",),
    "bounds lemma323": ("bounds.lemma323_bound",),
    "bounds helstrom-multi": ("bounds.helstrom_multistate_lower",),
    "bounds helstrom-two": ("bounds.helstrom_two_state",),
    "bounds gap": ("bounds.c_eve_gap",),
    "polar minus": ("polar.split_minus",),
    "polar plus": ("polar.split_plus",),
    "polar conservation": ("polar.conservation_residual",),
    "polar polarize": ("polar.polarize",),
    "polar secure": ("polar.secure_index_set", "polar.eve_polarize"),
    "simulate protocol": ("protosim.run_transmission", "protosim.resource_distance"),
    "simulate authentication": ("protosim.authentication_probability",),
    "simulate fano": ("protosim.fano_experiment",),
    "simulate transmit": ("channels.transmit",),
    "simulate code": ("codes.build_code",),
    "domination": ("protosim.domination_experiment",),
    "games bias": ("games.bias",),
    "games win": ("games.win_probability",),
    "games classical": ("games.classical_optimum",),
    "games epsilon": ("games.epsilon_optimality_check",),
    "games multiplayer": ("games.multiplayer_bias",),
    "verify": ("verify.run_suite",),
}


def _round(x):
    if isinstance(x, float) or isinstance(x, np.floating):
        x = float(x)
        if math.isinf(x) or math.isnan(x):
            return str(x)
        return float(f"{x:.{SIG_DIGITS}g}")
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.ndarray):
        return [_round(v) for v in x.tolist()]
    if is_dataclass(x) and not isinstance(x, type):
        return _round(asdict(x))
    if isinstance(x, dict):
        return {str(k): _round(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x, key=repr) if isinstance(x, (set, frozenset)) else x
        return [_round(v) for v in items]
    return x


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}.{i}")
    else:
        yield prefix, json.dumps(obj) if isinstance(obj, list) else obj


def render(report, fmt):
    report = _round(report)
    if fmt == "json":
        return json.dumps(report, sort_keys=True)
    if "csv" in report:
        return report["csv"]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    for key, value in _flatten(report):
        writer.writerow([key, value])
    return buf.getvalue()


# ---------------------------------------------------------------- parsing helpers

def _floats(text):
    return [float(v) for v in str(text).split(",") if v.strip()]


def _json_arg(text):
    """Inline JSON, or ``@path`` to read a file."""
    if text.startswith("@"):
        with open(text[1:]) as fh:
            return json.load(fh)
    return json.loads(text)


_NAMED_STATES = {
    "zero": [1, 0], "one": [0, 1], "plus": [1, 1], "minus": [1, -1],
}


def _state(text):
    if text in _NAMED_STATES:
        return qstate.DensityMatrix.pure(_NAMED_STATES[text])
    if text == "mixed":
        return qstate.DensityMatrix.maximally_mixed(2)
    return qstate.DensityMatrix.from_dict(_json_arg(text))


def _kraus(text):
    """``identity``, ``depolarizing:LAMBDA`` or a Kraus JSON document."""
    if text.startswith("depolarizing:"):
        return qstate.KrausChannel.depolarizing(float(text.split(":", 1)[1]))
    if text.startswith("identity"):
        dim = int(text.split(":", 1)[1]) if ":" in text else 2
        return qstate.KrausChannel.identity(dim)
    return qstate.KrausChannel.from_dict(_json_arg(text))


def _cq(text):
    """``amplitude:THETA``, ``classical``, ``useless`` or a cq-channel JSON document."""
    if text.startswith("amplitude:"):
        return polar.amplitude_channel(float(text.split(":", 1)[1]))
    if text == "classical":
        return holevo.CqChannel([_state("zero"), _state("one")])
    if text == "useless":
        return holevo.CqChannel([_state("zero"), _state("zero")])
    return holevo.CqChannel.from_dict(_json_arg(text))


def _sizes(args, prefix=""):
    get = lambda name: getattr(args, prefix + name, None)  # noqa: E731
    return rates.AlphabetSizes(lx=get("lx"), lx_star=get("lx_star"), ly=get("ly"),
                               ly_star=get("ly_star"), lz=get("lz"))


def _letters(text):
    return frozenset(v for v in text.split(",") if v)


# ---------------------------------------------------------------- handlers

def cmd_entropy(a):
    if a.op == "binary":
        return {"binary_entropy": info.binary_entropy(a.p)}
    if a.op == "shannon":
        return {"shannon_entropy": info.shannon_entropy(_floats(a.weights))}
    if a.op == "mi":
        return {"mutual_information": info.mutual_information(_json_arg(a.joint))}
    if a.op == "conditional":
        return {"conditional_entropy": info.conditional_entropy(_json_arg(a.joint))}
    return {"von_neumann_entropy": qstate.von_neumann_entropy(_state(a.state))}


def cmd_cascade(a):
    return {"cascade": info.cascade(a.eps, a.delta)}


def cmd_secrecy(a):
    if a.op == "cs":
        return {"cs": secrecy.cs(a.eps, a.delta)}
    if a.op == "cs-bar":
        return {"cs_bar": secrecy.cs_bar_bsc(a.eps, a.delta)}
    if a.op == "lower":
        lb = secrecy.thm4_lower(a.ea, a.eb, a.ee, clamp=a.clamp)
        return {"lower_bound": lb.value, "vacuous": lb.vacuous}
    model = channels.BroadcastModel.from_crossovers(a.eps, a.delta, a.conceptual_delta)
    if a.op == "upper":
        ub = secrecy.cs_bar_upper(model)
        return {"cs_bar_upper": ub.value, "prior": list(ub.prior)}
    if a.op == "cmi":
        return {"conditional_mi": channels.conditional_mi_given_z(model, [1 - a.p1, a.p1])}
    if a.op == "compose":
        return {"crossover": channels.compose(model.main, model.eve).crossover}
    if a.op == "forward":
        return {"eve_effective_crossover": channels.forward_conceptual(model).crossover,
                "eve_superior": model.eve_superior()}
    raise AssertionError(a.op)


def cmd_rates(a):
    if a.op == "overlap":
        return {"overlap": rates.overlap(rates.LetterAlphabets(_letters(a.x), _letters(a.y), _letters(a.z)))}
    if a.op == "prune":
        xs, ys = rates.prune(rates.LetterAlphabets(_letters(a.x), _letters(a.y), _letters(a.z)))
        return {"x_star": xs, "y_star": ys}
    if a.op == "branch":
        return rates.rate_branch(a.branch, _sizes(a)).as_dict()
    if a.op == "select":
        return {"branch": rates.select_branch(_sizes(a))}
    with warnings.catch_warnings():
        # warnings are reported in the payload instead
        warnings.simplefilter("ignore", rates.RegimeWarning)
        res = rates.adaptive_rates(_sizes(a), _sizes(a, "fc_"), _sizes(a, "bc_"))
    return res.as_dict()


def cmd_holevo(a):
    op = a.op
    if op == "chi":
        states = [_state(s) for s in a.states.split(";")]
        priors = _floats(a.priors) if a.priors else [1.0 / len(states)] * len(states)
        return {"chi": holevo.holevo_chi(holevo.Ensemble(priors, states))}
    if op in ("rate", "optimize"):
        bob, eve = _cq(a.bob), _kraus(a.eve)
        if op == "rate":
            return {"secrecy_rate": holevo.secrecy_rate(bob, eve, _floats(a.prior))}
        value, prior = holevo.optimize_secrecy_rate(bob, eve)
        return {"secrecy_rate": value, "prior": prior}
    rho = _state(a.rho)
    if op == "apply":
        return {"output": qstate.apply_channel(_kraus(a.channel), rho).to_dict()}
    sigma = _state(a.sigma)
    if op == "trace-distance":
        return {"trace_distance": qstate.trace_distance(rho, sigma)}
    if op == "fidelity":
        return {"fidelity": qstate.fidelity(rho, sigma)}
    if op == "relative-entropy":
        return {"relative_entropy": qstate.relative_entropy(rho, sigma)}
    if op == "dpi":
        return {"dpi_residual": qstate.check_dpi(_kraus(a.channel), rho, sigma)}
    if op == "contractivity":
        return {"contractivity_residual": qstate.check_contractivity(_kraus(a.channel), rho, sigma)}
    if op == "tensor":
        return {"output": qstate.tensor(rho, sigma).to_dict()}
    raise AssertionError(op)


def cmd_bounds(a):
    if a.op == "fano":
        return {"fano_min_error": bounds.fano_min_error(bounds.FanoInputs(a.M, a.chi))}
    if a.op == "lemma323":
        return asdict(bounds.lemma323_bound(a.N, a.M, a.chi, clamp=a.clamp))
    if a.op == "helstrom-multi":
        return {"helstrom_lower": bounds.helstrom_multistate_lower(a.M, a.eps)}
    if a.op == "helstrom-two":
        return {"success_probability": bounds.helstrom_two_state(_state(a.rho), _state(a.sigma))}
    return asdict(bounds.c_eve_gap(a.N, a.M, a.chi, a.eps, a.m_threshold, clamp=a.clamp))


def cmd_polar(a):
    w = polar.SynthesizedChannel.from_cq(_cq(a.channel))
    if a.op == "minus":
        return {"chi": w.chi(), "chi_minus": polar.split_minus(w).chi()}
    if a.op == "plus":
        return {"chi": w.chi(), "chi_plus": polar.split_plus(w).chi()}
    if a.op == "conservation":
        return {"conservation_residual": polar.conservation_residual(w)}
    bob = polar.polarize(w, a.depth)
    if a.op == "polarize":
        return {"channels": [asdict(c) for c in bob],
                "csv": polar.polarization_csv(bob, bob, polar.IndexSet(frozenset(), a.depth))}
    eve = polar.eve_polarize(w, _kraus(a.eve), a.depth)
    chosen = polar.secure_index_set(bob, eve, a.theta)
    return {"indices": chosen.indices, "rate": chosen.rate,
            "csv": polar.polarization_csv(bob, eve, chosen)}


def _protocol_config(a):
    return protosim.ProtocolConfig(n=a.n, p=a.p, q=a.q, rate=a.rate, tau=a.tau,
                                   trials=a.trials, seed=a.seed, cascade_delta=a.cascade_delta)


def cmd_simulate(a):
    if a.mode == "transmit":
        word = np.array([int(c) for c in a.word], dtype=np.uint8)
        out = channels.transmit(channels.Bsc(a.p), word, a.seed)
        return {"word": "".join(map(str, out))}
    if a.mode == "code":
        code = build_code(a.n, a.rate, a.seed)
        return {"n": code.n, "k": code.k, "block_lengths": code.lengths, "block_dims": code.dims,
                "generator": ["".join(map(str, row)) for row in code.generator_matrix()]}
    cfg = _protocol_config(a)
    if a.mode == "authentication":
        return {"authentication_probability": protosim.authentication_probability(cfg, a.workers)}
    if a.mode == "fano":
        f = protosim.fano_experiment(cfg, a.workers)
        return {"eve_error": f.eve_error, "mutual_information": f.mutual_information,
                "messages": f.messages, "fano_bound": f.fano_bound, "consistent": f.consistent}
    attack = a.attack == "on"
    if not a.dump:
        report = protosim.run_transmission(cfg, attack=attack, workers=a.workers)
    else:
        report, rows = protosim.simulate(cfg, attack=attack, workers=a.workers, keep_trials=True)
        with open(a.dump, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["trial", *rows])
            for i, vals in enumerate(zip(*rows.values())):
                writer.writerow([i, *(int(v) for v in vals)])
    out = asdict(report)
    out["resource_distance"] = protosim.resource_distance(report)
    out["theorem3_regime"] = cfg.theorem3_regime
    return out


def cmd_domination(a):
    base = _protocol_config(a)
    return protosim.domination_experiment(a.ea, a.eb, a.ee, a.delta, base, a.workers).as_dict()


def cmd_games(a):
    if a.op == "win":
        return {"win_probability": games.win_probability(a.beta)}
    if a.op == "multiplayer":
        rng = np.random.default_rng(a.seed)
        g = games.random_game((2, 2, 2), rng)
        strat = games.ghz_strategy(rng)
        return {"bias": games.multiplayer_bias(g, strat)}
    g = games.XorGame.from_json(_json_arg(a.game)) if a.game != "chsh" else games.XorGame.chsh()
    if a.op == "classical":
        return {"classical_optimum": games.classical_optimum(g)}
    strat = games.tsirelson_strategy() if a.strategy == "tsirelson" else games.trivial_strategy()
    if a.op == "bias":
        b = games.bias(g, strat)
        return {"bias": b, "win_probability": games.win_probability(b)}
    return {"epsilon_optimal": games.epsilon_optimality_check(g, strat, a.beta_star, a.eps)}


def cmd_verify(a):
    checks = verify.run_suite(size=a.size, seed=a.seed, only=a.only)
    return {"passed": all(c.passed for c in checks),
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks]}


# ---------------------------------------------------------------- parser

def _sub(subparsers, name, handler, help_text, ops=None):
    p = subparsers.add_parser(name, help=help_text, description=help_text)
    p.set_defaults(handler=handler, command=name)
    if ops is None:
        REGISTRY[name] = help_text
        return p, None
    inner = p.add_subparsers(dest="op", required=True, parser_class=subparsers._parser_class)
    parsers = {}
    for op, text in ops.items():
        sp = inner.add_parser(op, help=text, description=text)
        REGISTRY[f"{name} {op}"] = text
        parsers[op] = sp
    return p, parsers


def _protocol_flags(p, seed_required=True):
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--p", type=float, default=0.01)
    p.add_argument("--q", type=float, default=0.25)
    p.add_argument("--rate", type=float, default=0.5)
    p.add_argument("--tau", type=float, default=None, help="acceptance radius fraction; default (p+q)/2")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, required=seed_required)
    p.add_argument("--cascade-delta", type=float, default=0.0)


def build_parser():
    REGISTRY.clear()
    parser = argparse.ArgumentParser(prog="wiretap-lab", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--config", help="JSON file of flag values; explicit flags win")
    common.add_argument("--workers", type=int, default=None,
                        help="task cap (env WIRETAP_LAB_WORKERS); never changes results")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=lambda **kw: argparse.ArgumentParser(parents=[common], **kw))
    subparsers = {}

    _, ops = _sub(sub, "entropy", cmd_entropy, "entropies and mutual information", {
        "binary": "binary entropy h(p)", "shannon": "Shannon entropy of a distribution",
        "mi": "mutual information of a joint table", "conditional": "H(Y|X) of a joint table",
        "von-neumann": "von Neumann entropy of a state"})
    ops["binary"].add_argument("--p", type=float, required=True)
    ops["shannon"].add_argument("--weights", required=True, help="comma-separated probabilities")
    ops["mi"].add_argument("--joint", required=True, help="JSON matrix or @file")
    ops["conditional"].add_argument("--joint", required=True, help="JSON matrix or @file")
    ops["von-neumann"].add_argument("--state", required=True)
    subparsers["entropy"] = ops

    p, _ = _sub(sub, "cascade", cmd_cascade, "crossover of two BSCs in series")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    subparsers["cascade"] = {None: p}

    _, ops = _sub(sub, "secrecy", cmd_secrecy, "secrecy capacities and broadcast channels", {
        "cs": "capacity without public discussion", "cs-bar": "capacity with public discussion (closed form)",
        "upper": "sup over priors of I(X;Y|Z)", "lower": "pairwise-cascade lower bound",
        "cmi": "I(X;Y|Z) for a binary prior", "compose": "compose main and Eve BSCs",
        "forward": "Eve's forward conceptual channel"})
    for op, sp in ops.items():
        if op == "lower":
            sp.add_argument("--ea", type=float, required=True)
            sp.add_argument("--eb", type=float, required=True)
            sp.add_argument("--ee", type=float, required=True)
            sp.add_argument("--clamp", action="store_true")
            continue
        sp.add_argument("--eps", type=float, required=True, help="main-channel crossover")
        sp.add_argument("--delta", type=float, required=True, help="Eve-channel crossover")
        sp.add_argument("--conceptual-delta", type=float, default=0.0)
        sp.add_argument("--p1", type=float, default=0.5, help="P(X=1) for cmi")
    subparsers["secrecy"] = ops

    _, ops = _sub(sub, "rates", cmd_rates, "converse bit-transmission rates", {
        "overlap": "triple intersection of alphabets", "prune": "greedy pruning of overlap letters",
        "branch": "evaluate one rate branch", "select": "choose the rate branch",
        "adaptive": "r1, r2, r3 over the three channels"})
    for op in ("overlap", "prune"):
        for flag in ("--x", "--y", "--z"):
            ops[op].add_argument(flag, required=True, help="comma-separated letters")
    for op in ("branch", "select", "adaptive"):
        for name in ("lx", "lx-star", "ly", "ly-star", "lz"):
            ops[op].add_argument(f"--{name}", type=float)
    ops["branch"].add_argument("--branch", type=int, required=True, choices=(1, 2, 3, 4))
    for prefix in ("fc", "bc"):
        for name in ("lx", "lx-star", "ly", "ly-star", "lz"):
            ops["adaptive"].add_argument(f"--{prefix}-{name}", type=float)
    subparsers["rates"] = ops

    _, ops = _sub(sub, "holevo", cmd_holevo, "quantum states, channels and Holevo quantities", {
        "chi": "Holevo information of an ensemble", "rate": "chi_B - chi_E for a prior",
        "optimize": "best chi_B - chi_E over priors", "trace-distance": "||rho - sigma||_1",
        "fidelity": "Uhlmann fidelity", "relative-entropy": "D(rho||sigma)",
        "apply": "apply a Kraus channel", "dpi": "data-processing residual",
        "contractivity": "trace-norm contractivity residual", "tensor": "tensor product of states"})
    ops["chi"].add_argument("--states", required=True, help="';'-separated states")
    ops["chi"].add_argument("--priors")
    for op in ("rate", "optimize"):
        ops[op].add_argument("--bob", required=True, help="amplitude:THETA | classical | useless | JSON")
        ops[op].add_argument("--eve", required=True, help="identity | depolarizing:LAMBDA | Kraus JSON")
    ops["rate"].add_argument("--prior", required=True)
    for op in ("trace-distance", "fidelity", "relative-entropy", "apply", "dpi", "contractivity", "tensor"):
        ops[op].add_argument("--rho", required=True, help="zero|one|plus|minus|mixed or state JSON")
        if op != "apply":
            ops[op].add_argument("--sigma", required=True)
        if op in ("apply", "dpi", "contractivity"):
            ops[op].add_argument("--channel", required=True)
    subparsers["holevo"] = ops

    _, ops = _sub(sub, "bounds", cmd_bounds, "eavesdropper error-probability bounds", {
        "fano": "Fano minimum error", "lemma323": "log(1/N)(log M - chi - 1) with vacuity flag",
        "helstrom-multi": "multi-state Helstrom lower bound", "helstrom-two": "two-state optimal success",
        "gap": "piecewise C_Eve gap"})
    ops["fano"].add_argument("--M", type=int, required=True)
    ops["fano"].add_argument("--chi", type=float, required=True)
    for op in ("lemma323", "gap"):
        ops[op].add_argument("--N", type=int, required=True)
        ops[op].add_argument("--M", type=int, required=True)
        ops[op].add_argument("--chi", type=float, required=True)
        ops[op].add_argument("--clamp", action="store_true")
    ops["gap"].add_argument("--eps", type=float, default=0.0)
    ops["gap"].add_argument("--m-threshold", type=int, default=bounds.DEFAULT_M_THRESHOLD)
    ops["helstrom-multi"].add_argument("--M", type=int, required=True)
    ops["helstrom-multi"].add_argument("--eps", type=float, required=True)
    ops["helstrom-two"].add_argument("--rho", required=True)
    ops["helstrom-two"].add_argument("--sigma", required=True)
    subparsers["bounds"] = ops

    _, ops = _sub(sub, "polar", cmd_polar, "cq polar transform (CSV columns: index,path,chi_bob,chi_eve,selected)", {
        "minus": "chi of W-", "plus": "chi of W+", "conservation": "Holevo-sum conservation residual",
        "polarize": "all synthesized channels to a depth", "secure": "secure index set for Bob vs Eve"})
    for op, sp in ops.items():
        sp.add_argument("--channel", required=True, help="amplitude:THETA | classical | useless | JSON")
        if op in ("polarize", "secure"):
            sp.add_argument("--depth", type=int, default=1)
    ops["secure"].add_argument("--eve", required=True)
    ops["secure"].add_argument("--theta", type=float, required=True)
    subparsers["polar"] = ops

    p, _ = _sub(sub, "simulate", cmd_simulate,
                "protocol Monte Carlo (--dump CSV columns: trial,bob_distance,bob_ok,forgery_distance,forgery_accepted)")
    p.add_argument("mode", nargs="?", default="protocol",
                   choices=("protocol", "authentication", "fano", "transmit", "code"))
    _protocol_flags(p)
    p.add_argument("--attack", choices=("on", "off"), default="on")
    p.add_argument("--dump", help="write per-trial CSV to this path")
    p.add_argument("--word", default="0", help="bit string for transmit mode")
    for mode in ("protocol", "authentication", "fano", "transmit", "code"):
        REGISTRY[f"simulate {mode}"] = mode
    del REGISTRY["simulate"]
    subparsers["simulate"] = {None: p}

    p, _ = _sub(sub, "domination", cmd_domination, "P_EC / P_FA domination experiment")
    p.add_argument("--ea", type=float, required=True)
    p.add_argument("--eb", type=float, required=True)
    p.add_argument("--ee", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    _protocol_flags(p)
    subparsers["domination"] = {None: p}

    _, ops = _sub(sub, "games", cmd_games, "XOR games", {
        "bias": "bias of a strategy", "win": "win probability from bias",
        "classical": "classical optimum by enumeration", "epsilon": "epsilon-optimality check",
        "multiplayer": "three-player GHZ bias on a seeded random game"})
    for op in ("bias", "classical", "epsilon"):
        ops[op].add_argument("--game", default="chsh", help="chsh or game JSON")
    for op in ("bias", "epsilon"):
        ops[op].add_argument("--strategy", choices=("tsirelson", "trivial"), default="tsirelson")
    ops["epsilon"].add_argument("--beta-star", type=float, required=True)
    ops["epsilon"].add_argument("--eps", type=float, required=True)
    ops["win"].add_argument("--beta", type=float, required=True)
    ops["multiplayer"].add_argument("--seed", type=int, required=True)
    subparsers["games"] = ops

    p, _ = _sub(sub, "verify", cmd_verify, "run the property suite")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--size", type=float, default=1.0, help="scale factor on sample counts")
    p.add_argument("--only", nargs="*")
    subparsers["verify"] = {None: p}

    parser._wiretap_subparsers = subparsers
    return parser


def _config_path(argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    return pre.parse_known_args(argv)[0].config


def _target(parser, argv):
    """Subparser that will handle ``argv``, found from its leading positionals."""
    words = [w for w in argv if not w.startswith("-")]
    table = parser._wiretap_subparsers.get(words[0] if words else None)
    if table is None:
        return None
    if None in table:
        return table[None]
    return table.get(words[1] if len(words) > 1 else None)


def parse(argv):
    """Parse ``argv``; a ``--config`` JSON supplies defaults that explicit flags override."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    path = _config_path(argv)
    if path:
        with open(path) as fh:
            doc = {k.replace("-", "_"): v for k, v in json.load(fh).items()}
        target = _target(parser, argv)
        if target is not None:
            for action in target._actions:
                if action.dest in doc:
                    action.default = doc[action.dest]
                    action.required = False
    return parser.parse_args(argv)


def _effective_config(args):
    # workers never changes results, so it stays out of the echoed config
    skip = {"handler", "config", "workers", "format"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def dispatch(argv=None, stdout=None, stderr=None):
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parse(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    try:
        result = args.handler(args)
    except WiretapLabError as exc:
        print(f"domain error: {exc}", file=stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=stderr)
        return 1
    if args.format == "json":
        result = dict(result)
        result["config"] = _effective_config(args)
    print(render(result, args.format), file=stdout, end="" if args.format == "csv" else "\n")
    return 0


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
