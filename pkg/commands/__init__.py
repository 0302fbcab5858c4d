"""
Commands package for the command-line subcommands.
"""