"""
CLI Layer - argparse surface and command dispatch.
"""
