"""Command-line surface: subcommands, pattern output and run reports."""
