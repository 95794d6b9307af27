# Copyright (c) 2024, twistring developers.
# SPDX-License-Identifier: BSD-3-Clause

"""Main entry point for twistring CLI tools."""

import logging

import click

from twistring.tools.bifurcation import command as bifurcation_command
from twistring.tools.evolve import command as evolve_command
from twistring.tools.scan_phi import command as scan_phi_command
from twistring.tools.solve import command as solve_command
from twistring.tools.spectrum import command as spectrum_command
from twistring.tools.sweep_k0 import command as sweep_k0_command


@click.group(context_settings=dict(help_option_names=["-h", "--help"]), invoke_without_command=True)
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default="WARNING",
    help="Verbosity of the library log on stderr",
    show_default=True,
)
@click.pass_context
def main(ctx, log_level: str):
    """Standing waves of the twisted multicore-fiber ring.

    Solve for bound states, compute their spectra, propagate them and trace their branches.

    See help of commands to learn more."""

    logging.basicConfig(format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger("twistring").setLevel(log_level.upper())

    # This is needed to show help if no subcommand is provided
    if ctx.invoked_subcommand is None:
        click.echo(main.get_help(ctx))


main.add_command(solve_command)
main.add_command(spectrum_command)
main.add_command(evolve_command)
main.add_command(sweep_k0_command)
main.add_command(scan_phi_command)
main.add_command(bifurcation_command)

if __name__ == "__main__":
    main()
