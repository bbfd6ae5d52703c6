# cogs/decomposition.py
import click

import json_manager
from coherent.errors import CoherentError
from coherent.fock import z_matrix
from coherent.pauli import decomposition_to_json, ladder_strings, trace_project
from utils.checks import RunConfig, fail, qubits_option

# Trace projection visits all 4^N strings; beyond this it is too slow to be a quick check
VERIFY_MAX_QUBITS = 6


def _max_deviation(closed_form, projected) -> float:
    ours, theirs = closed_form.as_dict(), projected.as_dict()
    return max((abs(ours.get(axes, 0.0) - theirs.get(axes, 0.0)) for axes in set(ours) | set(theirs)), default=0.0)


@click.command(name="decompose")
@click.option("--qubits", "n_qubits", type=int, required=True, callback=qubits_option, help="Number of qubits N.")
@click.option("--matrix", type=click.Choice(["z1", "z2"], case_sensitive=False), required=True,
              help="z1 = i(a^dag - a), z2 = -(a + a^dag).")
@click.option("--output", type=click.Path(dir_okay=False), default=None, help="Output JSON file.")
@click.option("--verify", is_flag=True, help="Cross-check the closed form against trace projection.")
@click.pass_obj
def decompose(run: RunConfig, n_qubits, matrix, output, verify):
    """Writes the Pauli-string decomposition of Z1 or Z2 as JSON."""
    k = 1 if matrix.lower() == "z1" else 2
    try:
        decomp = ladder_strings(k, n_qubits)
        if verify:
            if n_qubits > VERIFY_MAX_QUBITS:
                fail(f"--verify is limited to N <= {VERIFY_MAX_QUBITS}")
            deviation = _max_deviation(decomp, trace_project(z_matrix(k, n_qubits)))
            if deviation > 1e-10:
                fail(f"Closed form deviates from trace projection by {deviation:.3e}")
            click.echo(f"✅ Closed form matches trace projection (max deviation {deviation:.1e}).")
    except CoherentError as e:
        fail(f"Could not decompose {matrix.upper()}: {e}")

    path = json_manager.target_path(output, run.output_dir, f"decompose_{matrix.lower()}_n{n_qubits}.json")
    json_manager.save_json(path, decomposition_to_json(decomp))
    click.echo(f"✅ {matrix.upper()} on {n_qubits} qubit(s): {len(decomp.terms)} Pauli strings written to {path}")


def setup(cli):
    cli.add_command(decompose)
