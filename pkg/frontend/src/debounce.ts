/**
 * Debounce an async lookup so only the last request within the window fires,
 * and stale responses never overwrite newer ones: the displayed state always
 * corresponds to the last completed response for the newest input.
 */
export interface DebouncedLookup<A, R> {
    trigger(arg: A): void;
    /** resolves once no lookup is pending (test hook) */
    settled(): Promise<void>;
    cancel(): void;
}

export function debouncedLookup<A, R>(
    run: (arg: A) => Promise<R>,
    apply: (arg: A, result: R) => void,
    waitMs: number,
    onError: (err: unknown) => void = () => undefined,
): DebouncedLookup<A, R> {
    let timer: ReturnType<typeof setTimeout> | null = null;
    let sequence = 0;
    let inFlight = 0;
    let waiters: (() => void)[] = [];

    function maybeSettle(): void {
        if (timer === null && inFlight === 0) {
            const toNotify = waiters;
            waiters = [];
            for (const notify of toNotify) notify();
        }
    }

    return {
        trigger(arg: A): void {
            if (timer !== null) clearTimeout(timer);
            timer = setTimeout(() => {
                timer = null;
                const mySeq = ++sequence;
                inFlight += 1;
                run(arg)
                    .then((result) => {
                        if (mySeq === sequence) apply(arg, result);
                    })
                    .catch((err) => {
                        if (mySeq === sequence) onError(err);
                    })
                    .finally(() => {
                        inFlight -= 1;
                        maybeSettle();
                    });
            }, waitMs);
        },
        settled(): Promise<void> {
            return new Promise((resolve) => {
                waiters.push(resolve);
                maybeSettle();
            });
        },
        cancel(): void {
            if (timer !== null) clearTimeout(timer);
            timer = null;
            sequence += 1;
            maybeSettle();
        },
    };
}
