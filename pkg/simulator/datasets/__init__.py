from .dataset import BatchIter, Dataset, batches
from .synthetic import DomainSpec, gen_synthetic_domains
from .csv_io import load_csv, write_csv

__all__ = ['BatchIter', 'Dataset', 'batches', 'DomainSpec', 'gen_synthetic_domains',
           'load_csv', 'write_csv']
