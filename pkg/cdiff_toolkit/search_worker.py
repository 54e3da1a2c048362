#!/usr/bin/env python3
"""
Search Worker Module
Background threads that drain a queue of exhaustive-search chunks
"""
import logging
import sys
import threading
import time
from queue import Empty, Queue

from tqdm import tqdm

from cdiff_toolkit.config import get_config

logger = logging.getLogger(__name__)


class SearchWorker(threading.Thread):
    """Worker thread evaluating search chunks until the queue is empty"""

    def __init__(self, jobs, results, task, on_chunk_done=None, stop_event=None):
        super().__init__(daemon=True)
        self.jobs = jobs
        self.results = results
        self.task = task
        self.on_chunk_done = on_chunk_done
        self.error = None
        self.chunks_done = 0

        # Event for thread control, shared by every worker of one pool
        self._stop_event = stop_event or threading.Event()

    def stop(self):
        """Stop this worker and its peers after their current chunk"""
        self._stop_event.set()

    def run(self):
        """Main thread execution loop"""
        while not self._stop_event.is_set():
            try:
                index, job = self.jobs.get_nowait()
            except Empty:
                break

            try:
                # each chunk writes its own slot, so no lock is needed
                self.results[index] = self.task(job)
                self.chunks_done += 1
            except Exception as e:
                self.error = e
                logger.error("search chunk %d failed: %s", index, e)
                self.stop()
                break
            finally:
                self.jobs.task_done()

            if self.on_chunk_done:
                self.on_chunk_done(index)


class SearchPool:
    """Runs a task over chunks on N worker threads; results keep chunk order"""

    def __init__(self, threads=None, progress=None, label="search"):
        self.threads = threads or get_config().thread_count()
        self.progress = get_config().search['progress'] if progress is None else progress
        self.label = label

        # Statistics
        self.total_chunks = 0
        self.elapsed = 0.0

    def map(self, task, jobs):
        """Apply task to every job; returns results in job order"""
        jobs = list(jobs)
        self.total_chunks = len(jobs)
        start = time.perf_counter()

        bar = None
        if self.progress:
            # bars only draw on a terminal
            bar = tqdm(total=len(jobs), desc=self.label, leave=False,
                       disable=not sys.stderr.isatty())
        lock = threading.Lock()

        def on_chunk_done(_index):
            if bar is not None:
                with lock:
                    bar.update(1)

        try:
            if self.threads == 1 or len(jobs) <= 1:
                results = []
                for index, job in enumerate(jobs):
                    results.append(task(job))
                    on_chunk_done(index)
            else:
                results = self._run_threaded(task, jobs, on_chunk_done)
        finally:
            if bar is not None:
                bar.close()

        self.elapsed = time.perf_counter() - start
        logger.debug("%s: %d chunks on %d threads in %.3fs",
                     self.label, len(jobs), self.threads, self.elapsed)
        return results

    def _run_threaded(self, task, jobs, on_chunk_done):
        queue = Queue()
        for index, job in enumerate(jobs):
            queue.put((index, job))

        results = [None] * len(jobs)
        stop_event = threading.Event()
        workers = [
            SearchWorker(queue, results, task, on_chunk_done, stop_event)
            for _ in range(min(self.threads, len(jobs)))
        ]
        for worker in workers:
            worker.start()
        for worker in workers:
            worker.join()

        for worker in workers:
            if worker.error is not None:
                raise worker.error
        return results

    def get_stats(self):
        """Get statistics of the last run"""
        return {
            'threads': self.threads,
            'chunks': self.total_chunks,
            'elapsed': self.elapsed,
        }
