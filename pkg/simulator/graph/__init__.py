from .graph import Graph, Node, backward, run_op

__all__ = ['Graph', 'Node', 'backward', 'run_op']
