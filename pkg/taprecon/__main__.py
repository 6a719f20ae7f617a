from taprecon.cli import cli

cli(prog_name="taprecon")
