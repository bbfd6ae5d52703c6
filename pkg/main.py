import importlib
import os

import click
from dotenv import load_dotenv

import json_manager
from coherent.errors import CoherentError
from coherent.parallel import threads_from_env
from utils.checks import RunConfig

load_dotenv()

COGS_DIR = os.path.join(os.path.dirname(__file__), 'cogs')


class CoherentCLI(click.Group):
    """Command group whose subcommands live in cogs/, each registered by its setup()."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.load_cogs()

    def load_cogs(self):
        cogs_to_load = sorted(f[:-3] for f in os.listdir(COGS_DIR) if f.endswith('.py') and not f.startswith('_'))
        for cog in cogs_to_load:
            try:
                module = importlib.import_module(f'cogs.{cog}')
                module.setup(self)
            except Exception as e:
                click.echo(f'❌ Failed to load cog {cog}: {e}', err=True)


def _threads():
    try:
        return threads_from_env()
    except CoherentError as e:
        click.echo(f"⚠️ {e}; running single-threaded.", err=True)
        return 1


@click.group(cls=CoherentCLI)
@click.option('--config', 'config_path', type=click.Path(dir_okay=False), default=json_manager.CONFIG_FILE,
              help='Path to config.json.')
@click.option('--output-dir', default=None, help='Directory for outputs without an explicit --output.')
@click.option('--threads', type=click.IntRange(min=1), default=None, help='Overrides COHERENT_THREADS.')
@click.pass_context
def cli(ctx, config_path, output_dir, threads):
    """Digital preparation of bosonic coherent states on qubits."""
    config = json_manager.load_config(config_path)
    ctx.obj = RunConfig(
        config=config,
        threads=threads or _threads(),
        output_dir=output_dir or config.get('output_dir', 'data'),
    )


if __name__ == "__main__":
    cli()
