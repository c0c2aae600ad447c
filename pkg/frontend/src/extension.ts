// Thin editor client: every diagnostic and edit comes from the ezasp
// language server; this file only wires the server into VS Code.
import * as fs from "fs";
import * as vscode from "vscode";
import {
    ExecuteCommandParams,
    ExecuteCommandRequest,
    LanguageClient,
    LanguageClientOptions,
    ServerOptions,
    Trace,
} from "vscode-languageclient/node";

import { MISSING_SERVER_MESSAGE, readSettings, resolveServerCommand } from "./settings";

const REORDER_SERVER_COMMAND = "ezasp.reorder";
const INIT_CONFIG_SERVER_COMMAND = "ezasp.initConfig";

let client: LanguageClient | undefined;

function sendServerCommand(command: string, args: unknown[]): void {
    if (client === undefined) {
        vscode.window.showErrorMessage(MISSING_SERVER_MESSAGE);
        return;
    }
    const params: ExecuteCommandParams = { command, arguments: args };
    client.sendRequest(ExecuteCommandRequest.type, params);
}

function reorderProgram(): void {
    const editor = vscode.window.activeTextEditor;
    if (editor === undefined || editor.document.languageId !== "asp") {
        vscode.window.showInformationMessage("Open an ASP (.lp) file to reorder it.");
        return;
    }
    sendServerCommand(REORDER_SERVER_COMMAND, [editor.document.uri.toString()]);
}

function generateConfig(): void {
    const editor = vscode.window.activeTextEditor;
    const folder =
        editor !== undefined
            ? vscode.workspace.getWorkspaceFolder(editor.document.uri)
            : vscode.workspace.workspaceFolders?.[0];
    const target = folder?.uri.fsPath;
    if (target === undefined) {
        vscode.window.showInformationMessage("Open a folder to generate ezasp.json in.");
        return;
    }
    sendServerCommand(INIT_CONFIG_SERVER_COMMAND, [target]);
}

export async function activate(context: vscode.ExtensionContext): Promise<void> {
    // Commands are registered up front so the extension stays loaded and
    // informative even when the server binary is missing.
    context.subscriptions.push(
        vscode.commands.registerCommand("ezasp.reorderProgram", reorderProgram),
        vscode.commands.registerCommand("ezasp.generateConfig", generateConfig),
    );

    const settings = readSettings((key) => vscode.workspace.getConfiguration().get(key));
    const server = resolveServerCommand(settings, fs.existsSync);
    if (server === undefined) {
        vscode.window.showErrorMessage(MISSING_SERVER_MESSAGE);
        return;
    }

    const serverOptions: ServerOptions = {
        run: { command: server.command, args: server.args },
        debug: { command: server.command, args: server.args },
    };
    const clientOptions: LanguageClientOptions = {
        documentSelector: [
            { scheme: "file", language: "asp" },
            { scheme: "untitled", language: "asp" },
        ],
    };

    client = new LanguageClient("ezasp", "EZASP Language Server", serverOptions, clientOptions);
    try {
        await client.start();
        await client.setTrace(Trace.fromString(settings.trace));
        context.subscriptions.push(client);
    } catch (err) {
        client = undefined;
        vscode.window.showErrorMessage(`${MISSING_SERVER_MESSAGE} (${err})`);
    }
}

export function deactivate(): Thenable<void> | undefined {
    const active = client;
    client = undefined;
    return active?.stop();
}
