# Copyright (c) 2024, twistring developers.
# SPDX-License-Identifier: BSD-3-Clause

import logging
import os
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Callable, ClassVar, List, Optional, Sequence, TypeVar

import tqdm

__all__ = ("WorkerConfig",)

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


@dataclass(eq=False)
class WorkerConfig:
    """
    Provides the parallelism used for independent computations, e.g. the cells of a k0 sweep or
    the couplings of a twist scan. A single branch trace is sequential and never split.
    The numerical routines are re-entrant, so cells run in threads of the same process.
    """

    #: The number of worker threads. May be 0 to run everything in the calling thread.
    num_workers: int = 0

    #: Environment variable capping the number of threads.
    env_var: ClassVar[str] = "TWISTRING_THREADS"

    def __post_init__(self):
        if self.num_workers < 0:
            raise ValueError(f"num_workers must be non-negative, got {self.num_workers}")

    @classmethod
    def from_env(cls, default: Optional[int] = None) -> "WorkerConfig":
        """Worker config from ``TWISTRING_THREADS``, falling back to ``default`` or the number of
        CPUs (at most 8)."""
        if default is None:
            default = min(os.cpu_count() or 1, 8)
        raw = os.environ.get(cls.env_var)
        if raw is None or raw.strip() == "":
            return cls(num_workers=default)
        try:
            num_workers = int(raw)
        except ValueError:
            raise ValueError(f"{cls.env_var} must be an integer, got {raw!r}") from None
        return cls(num_workers=max(0, num_workers))

    def map(
        self,
        fn: Callable[[T], R],
        items: Sequence[T],
        progress: bool = False,
        desc: Optional[str] = None,
    ) -> List[R]:
        """Applies ``fn`` to every item and returns the results in item order.

        Args:
            fn: Function applied to each item. Must be thread-safe.
            items: The independent work items.
            progress: Show a tqdm progress bar.
            desc: Label of the progress bar.

        Returns:
            ``[fn(item) for item in items]``
        """
        items = list(items)
        if self.num_workers <= 1 or len(items) <= 1:
            return [fn(item) for item in tqdm.tqdm(items, desc=desc, disable=not progress)]
        workers = min(self.num_workers, len(items))
        logger.debug(f"Running {len(items)} items on {workers} threads")
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(fn, item) for item in items]
            with tqdm.tqdm(total=len(futures), desc=desc, disable=not progress) as bar:
                for _ in as_completed(futures):
                    bar.update(1)
            return [future.result() for future in futures]
