"""End-to-end tests of the command line and the example acceptance suite."""
