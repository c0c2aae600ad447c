// Pure helpers for reading extension settings and resolving the server
// command; kept free of the vscode module so they are unit-testable.

export type TraceLevel = "off" | "messages" | "verbose";

export interface ClientSettings {
    serverPath?: string;
    trace: TraceLevel;
}

export interface ServerCommand {
    command: string;
    args: string[];
}

const TRACE_LEVELS: TraceLevel[] = ["off", "messages", "verbose"];

export function readSettings(get: (key: string) => unknown): ClientSettings {
    const rawPath = get("ezasp.serverPath");
    const rawTrace = get("ezasp.trace");
    const serverPath =
        typeof rawPath === "string" && rawPath.trim() !== "" ? rawPath.trim() : undefined;
    const trace = TRACE_LEVELS.includes(rawTrace as TraceLevel)
        ? (rawTrace as TraceLevel)
        : "off";
    return { serverPath, trace };
}

/**
 * Resolve the command that launches the language server.
 *
 * An explicit serverPath must exist on disk; without one the `ezasp`
 * executable is resolved from PATH at spawn time. Returns undefined when
 * the configured path is missing, so the caller can surface an install
 * hint instead of crashing.
 */
export function resolveServerCommand(
    settings: ClientSettings,
    exists: (path: string) => boolean,
): ServerCommand | undefined {
    if (settings.serverPath !== undefined) {
        if (!exists(settings.serverPath)) {
            return undefined;
        }
        return { command: settings.serverPath, args: ["lsp"] };
    }
    return { command: "ezasp", args: ["lsp"] };
}

export const MISSING_SERVER_MESSAGE =
    "The ezasp language server was not found. Install it with " +
    "'pip install ezasp' or point ezasp.serverPath at the executable.";
