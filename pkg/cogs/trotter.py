# cogs/trotter.py
import click

import json_manager
from coherent.circuit import circuit_to_json
from coherent.displacement import (
    BLOCK_ORDERS,
    TROTTER_BASELINE,
    DisplacementPlan,
    build_displacement_circuit,
    fidelity,
    fock_distribution,
    prepare as prepare_state,
    prepare_exact,
    total_variation,
    trotter_sweep,
)
from coherent.errors import CoherentError
from coherent.fock import coherent_target, mean_photon_number, truncated_prob, truncation_factor
from utils import plots
from utils.checks import RunConfig, alpha_option, fail, qubits_option, range_option, report_warnings

FIDELITY_THRESHOLD = 0.9999


def _alpha_label(alpha: complex) -> str:
    return f"{alpha.real:g}{alpha.imag:+g}i"


def _steps(run: RunConfig, steps):
    return steps if steps is not None else int(run.section("trotter").get("default_steps", 14))


def _block_order(run: RunConfig, block_order):
    return block_order or run.section("trotter").get("block_order", "real_first")


# --- Shared options ---

def _state_options(f):
    f = click.option("--block-order", type=click.Choice(BLOCK_ORDERS), default=None,
                     help="Which Trotter block runs first in each step.")(f)
    f = click.option("--qubits", "n_qubits", type=int, required=True, callback=qubits_option, help="Number of qubits N.")(f)
    f = click.option("--alpha", type=str, required=True, callback=alpha_option, help='Displacement, e.g. "1+1i".')(f)
    return f


def _output_options(f):
    f = click.option("--plot", is_flag=True, help="Also write an SVG chart next to the data file.")(f)
    f = click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)(f)
    f = click.option("--output", type=click.Path(dir_okay=False), default=None, help="Output data file.")(f)
    return f


def _svg_path(path: str) -> str:
    return path.rsplit(".", 1)[0] + ".svg"


def _write_rows(run: RunConfig, path, fmt, fieldnames, rows):
    if fmt == "json":
        json_manager.save_json(path, rows)
    else:
        json_manager.save_csv(path, fieldnames, rows, digits=run.digits)


# --- Commands ---

@click.command(name="prepare")
@_state_options
@click.option("--steps", type=click.IntRange(min=1), default=None, help="Trotter steps M.")
@click.option("--exact", is_flag=True, help="Also report the dense matrix-exponential state.")
@click.option("--circuit", "circuit_path", type=click.Path(dir_okay=False), default=None,
              help="Also write the compiled gate list as JSON.")
@click.option("--output", type=click.Path(dir_okay=False), default=None, help="Output JSON file.")
@click.pass_obj
def prepare(run: RunConfig, alpha, n_qubits, block_order, steps, exact, circuit_path, output):
    """Prepares |alpha> with the Trotterized displacement circuit."""
    steps = _steps(run, steps)
    try:
        with report_warnings():
            plan = DisplacementPlan(alpha, n_qubits, steps, _block_order(run, block_order))
            state = prepare_state(plan)
            target = coherent_target(alpha, n_qubits, TROTTER_BASELINE)
            document = {
                "alpha": [alpha.real, alpha.imag],
                "n_qubits": n_qubits,
                "trotter_steps": steps,
                "fidelity": fidelity(state, target),
                "amplitudes": [[a.real, a.imag] for a in state.amplitudes.tolist()],
                "probabilities": fock_distribution(state),
            }
            if exact:
                reference = prepare_exact(alpha, n_qubits)
                document["exact_fidelity"] = fidelity(reference, target)
                document["trotter_vs_exact"] = fidelity(state, reference)
    except CoherentError as e:
        fail(f"Could not prepare |{_alpha_label(alpha)}>: {e}")

    path = json_manager.target_path(output, run.output_dir, f"prepare_n{n_qubits}_m{steps}.json")
    json_manager.save_json(path, document)
    if circuit_path:
        circuit_document = circuit_to_json(build_displacement_circuit(plan))
        json_manager.save_json(json_manager.target_path(circuit_path, run.output_dir, ""), circuit_document)
    click.echo(f"✅ |{_alpha_label(alpha)}> on {n_qubits} qubits, M={steps}: fidelity {document['fidelity']:.6f} -> {path}")
    if exact:
        click.echo(f"   dense exponential: fidelity {document['exact_fidelity']:.6f}, "
                   f"overlap with Trotter state {document['trotter_vs_exact']:.6f}")


@click.command(name="sweep")
@_state_options
@click.option("--steps", "m_values", type=str, default="6:30", show_default=True, callback=range_option,
              help="Trotter steps: a range 6:30, a list 6,10,14 or one value.")
@_output_options
@click.pass_obj
def sweep(run: RunConfig, alpha, n_qubits, block_order, m_values, output, fmt, plot):
    """Fidelity against the number of Trotter steps."""
    try:
        with report_warnings():
            rows = trotter_sweep(alpha, n_qubits, m_values, threads=run.threads, block_order=_block_order(run, block_order))
    except CoherentError as e:
        fail(f"Sweep failed: {e}")

    records = [{"m": row.m, "fidelity": row.fidelity} for row in rows]
    path = json_manager.target_path(output, run.output_dir, f"sweep_n{n_qubits}.{fmt}")
    _write_rows(run, path, fmt, ["m", "fidelity"], records)
    if plot:
        plots.line_chart(
            _svg_path(path), [r["m"] for r in records], [r["fidelity"] for r in records],
            xlabel="Trotter steps M", ylabel="Fidelity F", title=f"|{_alpha_label(alpha)}>, N={n_qubits}",
            plot_config=run.section("plot"), threshold=FIDELITY_THRESHOLD,
        )

    passing = [r["m"] for r in records if r["fidelity"] >= FIDELITY_THRESHOLD]
    click.echo(f"✅ {len(records)} rows written to {path}")
    if passing:
        click.echo(f"   F >= {FIDELITY_THRESHOLD} from M={passing[0]}")
    else:
        click.echo(f"⚠️ No M in the sweep reaches F >= {FIDELITY_THRESHOLD}", err=True)


@click.command(name="dist")
@_state_options
@click.option("--steps", type=click.IntRange(min=1), default=None, help="Trotter steps M.")
@_output_options
@click.pass_obj
def dist(run: RunConfig, alpha, n_qubits, block_order, steps, output, fmt, plot):
    """Fock-number distribution of the prepared state next to the truncated Poisson law."""
    steps = _steps(run, steps)
    try:
        with report_warnings():
            state = prepare_state(DisplacementPlan(alpha, n_qubits, steps, _block_order(run, block_order)))
            probabilities = fock_distribution(state)
            baseline = fidelity(state, coherent_target(alpha, n_qubits, TROTTER_BASELINE))
            reference = [truncated_prob(m, alpha, n_qubits) for m in range(len(probabilities))]
            factor = truncation_factor(alpha, n_qubits)
    except CoherentError as e:
        fail(f"Could not compute the distribution: {e}")

    records = [
        {"fock_number": m, "probability": p, "poisson_reference": q}
        for m, (p, q) in enumerate(zip(probabilities, reference))
    ]
    path = json_manager.target_path(output, run.output_dir, f"dist_n{n_qubits}_m{steps}.{fmt}")
    _write_rows(run, path, fmt, ["fock_number", "probability", "poisson_reference"], records)
    if plot:
        plots.bar_chart(
            _svg_path(path), list(range(len(probabilities))), probabilities,
            xlabel="Fock number n", ylabel="Probability", title=f"|{_alpha_label(alpha)}>, N={n_qubits}, M={steps}",
            plot_config=run.section("plot"), reference=reference, reference_label="truncated Poisson",
        )

    click.echo(f"✅ {len(records)} Fock probabilities written to {path}")
    click.echo(f"   <n> = {mean_photon_number(probabilities):.6f} (|alpha|^2 = {abs(alpha) ** 2:.6f}), "
               f"truncation factor {factor:.6f}, total variation {total_variation(probabilities, reference):.2e}")
    click.echo(f"   fidelity {baseline:.6f}")


def setup(cli):
    cli.add_command(prepare)
    cli.add_command(sweep)
    cli.add_command(dist)
