# cogs/variational.py
import click

import json_manager
from coherent.errors import CoherentError
from coherent.fock import coherent_target
from coherent.vqa import (
    OPTIMIZERS,
    SCHEMES,
    AnsatzSpec,
    initial_params,
    layer_sweep,
    resource_report,
    structural_count,
    train as train_ansatz,
)
from utils import plots
from utils.checks import (
    EXIT_NOT_CONVERGED,
    RunConfig,
    alpha_option,
    fail,
    qubits_option,
    range_option,
    report_warnings,
)

SCHEME_CHOICES = [s.lower() for s in SCHEMES]


def _train_options(run: RunConfig, label, max_iterations, tolerance, optimizer, verbose):
    """Merges command flags over the vqa section of config.json."""
    vqa = run.section("vqa")
    every = max(1, int(vqa.get("progress_every", 100)))

    def progress(iteration, cost):
        if iteration % every == 0:
            click.echo(f"   [{label}] iteration {iteration}: cost {cost:.3e}")

    return {
        "max_iterations": max_iterations or int(vqa.get("max_iterations", 10000)),
        "cost_tolerance": tolerance or float(vqa.get("cost_tolerance", 1e-5)),
        "gradient_step": float(vqa.get("gradient_step", 1e-6)),
        "optimizer_tolerance": float(vqa.get("optimizer_tolerance", 1e-6)),
        "method": optimizer or vqa.get("optimizer", "SLSQP"),
        "callback": progress if verbose else None,
    }


def _vqa_options(f):
    f = click.option("--verbose", is_flag=True, help="Print periodic optimizer progress.")(f)
    f = click.option("--require-converged", is_flag=True, help="Exit with status 3 unless training converges.")(f)
    f = click.option("--optimizer", type=click.Choice(OPTIMIZERS, case_sensitive=False), default=None)(f)
    f = click.option("--tolerance", type=click.FloatRange(min=0, min_open=True), default=None, help="Cost tolerance.")(f)
    f = click.option("--max-iterations", type=click.IntRange(min=1), default=None)(f)
    f = click.option("--alpha", type=str, default="1+1i", show_default=True, callback=alpha_option)(f)
    f = click.option("--qubits", "n_qubits", type=int, default=4, show_default=True, callback=qubits_option)(f)
    f = click.option("--scheme", type=click.Choice(SCHEME_CHOICES, case_sensitive=False), required=True)(f)
    return f


@click.command(name="train")
@_vqa_options
@click.option("--layers", type=click.IntRange(min=1), required=True, help="Number of ansatz layers M_l.")
@click.option("--output", type=click.Path(dir_okay=False), default=None, help="Output report JSON.")
@click.pass_obj
def train(run: RunConfig, scheme, n_qubits, alpha, max_iterations, tolerance, optimizer, require_converged,
          verbose, layers, output):
    """Trains one ansatz towards |alpha> and writes the training report."""
    try:
        with report_warnings():
            spec = AnsatzSpec(scheme, n_qubits, layers)
            target = coherent_target(alpha, n_qubits)
            options = _train_options(run, f"{spec.scheme}/{layers}", max_iterations, tolerance, optimizer, verbose)
            start = initial_params(spec, float(run.section("vqa").get("initial_value", 1.0)))
            report = train_ansatz(spec, target, initial_params=start, **options)
    except CoherentError as e:
        fail(f"Training failed: {e}")

    path = json_manager.target_path(output, run.output_dir, f"train_{spec.scheme.lower()}_n{n_qubits}_l{layers}.json")
    json_manager.save_json(path, report.report_to_json())
    summary = (f"Scheme {spec.scheme}, N={n_qubits}, M_l={layers}: fidelity {report.final_fidelity:.6f} "
               f"after {report.iterations} iterations -> {path}")
    if report.converged:
        click.echo(f"✅ {summary}")
    else:
        click.echo(f"⚠️ Not converged ({report.message or 'iteration cap'}). {summary}", err=True)
        if require_converged:
            fail("Training did not reach the cost tolerance", code=EXIT_NOT_CONVERGED)


@click.command(name="layers")
@_vqa_options
@click.option("--layers", "layer_values", type=str, default="1:6", show_default=True, callback=range_option,
              help="Layer counts: a range 1:6, a list 2,4,6 or one value.")
@click.option("--output", type=click.Path(dir_okay=False), default=None, help="Output data file.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--plot", is_flag=True, help="Also write an SVG chart next to the data file.")
@click.pass_obj
def layers(run: RunConfig, scheme, n_qubits, alpha, max_iterations, tolerance, optimizer, require_converged,
           verbose, layer_values, output, fmt, plot):
    """Final fidelity against the number of ansatz layers."""
    try:
        with report_warnings():
            target = coherent_target(alpha, n_qubits)
            options = _train_options(run, scheme.upper(), max_iterations, tolerance, optimizer, verbose)
            rows = layer_sweep(scheme, n_qubits, target, layer_values, threads=run.threads,
                               initial_value=float(run.section("vqa").get("initial_value", 1.0)), **options)
    except CoherentError as e:
        fail(f"Layer sweep failed: {e}")

    records = [
        {"layers": row.layers, "fidelity": row.final_fidelity, "iterations": row.iterations, "converged": row.converged}
        for row in rows
    ]
    path = json_manager.target_path(output, run.output_dir, f"layers_{scheme.lower()}_n{n_qubits}.{fmt}")
    if fmt == "json":
        json_manager.save_json(path, records)
    else:
        json_manager.save_csv(path, ["layers", "fidelity", "iterations"], records, digits=run.digits)
    if plot:
        plots.line_chart(
            path.rsplit(".", 1)[0] + ".svg", [r["layers"] for r in records], [r["fidelity"] for r in records],
            xlabel="Layers M_l", ylabel="Fidelity F", title=f"Scheme {scheme.upper()}, N={n_qubits}",
            plot_config=run.section("plot"), threshold=0.9999,
        )

    for r in records:
        mark = "✅" if r["converged"] else "⚠️"
        click.echo(f"{mark} M_l={r['layers']}: fidelity {r['fidelity']:.6f}, {r['iterations']} iterations")
    click.echo(f"✅ {len(records)} rows written to {path}")
    if require_converged and not all(r["converged"] for r in records):
        fail("At least one layer count did not reach the cost tolerance", code=EXIT_NOT_CONVERGED)


@click.command(name="gatecount")
@click.option("--scheme", type=click.Choice(SCHEME_CHOICES + ["all"], case_sensitive=False), default="all",
              show_default=True)
@click.option("--qubits", "n_qubits", type=int, default=4, show_default=True, callback=qubits_option)
@click.option("--layers", "layer_values", type=str, required=True, callback=range_option,
              help="Layer counts: a range 1:6, a list 4,6 or one value.")
@click.option("--output", type=click.Path(dir_okay=False), default=None, help="Output data file.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.pass_obj
def gatecount(run: RunConfig, scheme, n_qubits, layer_values, output, fmt):
    """Parameter, single-qubit and CNOT counts for each ansatz."""
    schemes = SCHEMES if scheme.lower() == "all" else (scheme.upper(),)
    records = []
    try:
        for name in schemes:
            for count in layer_values:
                spec = AnsatzSpec(name, n_qubits, count)
                closed, built = resource_report(spec), structural_count(spec)
                if closed != built:
                    fail(f"Scheme {name} M_l={count}: closed form {closed} disagrees with the built circuit {built}")
                records.append({
                    "scheme": name, "n_qubits": n_qubits, "layers": count,
                    "params": built.params, "single_qubit": built.single_qubit, "cnot": built.cnot,
                })
    except CoherentError as e:
        fail(f"Could not count gates: {e}")

    fieldnames = ["scheme", "n_qubits", "layers", "params", "single_qubit", "cnot"]
    path = json_manager.target_path(output, run.output_dir, f"gatecount_n{n_qubits}.{fmt}")
    if fmt == "json":
        json_manager.save_json(path, records)
    else:
        json_manager.save_csv(path, fieldnames, records, digits=run.digits)
    for r in records:
        click.echo(f"✅ Scheme {r['scheme']}, M_l={r['layers']}: params={r['params']}, "
                   f"single={r['single_qubit']}, cnot={r['cnot']}")


def setup(cli):
    cli.add_command(train)
    cli.add_command(layers)
    cli.add_command(gatecount)
